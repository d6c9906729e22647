#pragma once

// Touchstone version 1 (.s1p - .s4p) reader and writer.
//
// Option line: "# <unit> <parameter> <format> R <ohms>", case-insensitive, any
// field may be omitted (defaults GHz, S, MA, R 50). "!" starts a comment.
// Record layout per frequency:
//   1 port : f S11
//   2 ports: f S11 S21 S12 S22          (one line)
//   3/4    : f S11 S12 .. S1n / S21 .. (row-major, each row on its own line)
// Angles are degrees in files and radians in memory.

#include "rfsic/netcore.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rfsic {

enum class FreqUnit { hz, khz, mhz, ghz };
enum class DataFormat { ri, ma, db };

const char* to_string(FreqUnit u);
const char* to_string(DataFormat f);
DataFormat parse_data_format(std::string_view text);

struct TouchstoneOptions {
    FreqUnit freq_unit = FreqUnit::ghz;
    DataFormat format = DataFormat::ma;
    double z_ref = kReferenceImpedance;
};

struct TouchstoneFile {
    TouchstoneOptions options;
    NetworkBlock block;
    std::vector<std::string> warnings;
};

// Full parse including the option line as written. Throws ParseError with a
// 1-based line number.
TouchstoneFile read_touchstone(std::string_view text, int n_ports, std::string block_name = "touchstone");

NetworkBlock parse_touchstone(std::string_view text, int n_ports, std::string block_name = "touchstone");

// Frequencies are written in GHz. Numbers use the shortest representation that
// reads back to the same double.
std::string write_touchstone(const NetworkBlock& b, DataFormat fmt);

// Port count from a ".sNp" extension; throws InputError for anything else
// (including Touchstone v2 ".ts").
int ports_from_extension(const std::string& path);

NetworkBlock load_touchstone_file(const std::string& path, std::string block_name = {});

}  // namespace rfsic
