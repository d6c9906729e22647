#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfsic {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters, malformed files, invalid topologies. The CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// (I - S_ii P) is numerically singular at some frequency. Exit code 4.
class IllPosedError : public Error {
public:
    IllPosedError(double frequency_hz, const std::string& what)
        : Error(what), frequency_hz_(frequency_hz) {}

    double frequency_hz() const noexcept { return frequency_hz_; }

private:
    double frequency_hz_;
};

// Runtime failure of a solve or search that is not an input problem. Exit code 3.
class SolveError : public Error {
public:
    using Error::Error;
};

}  // namespace rfsic
