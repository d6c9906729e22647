#pragma once

#include <iosfwd>

namespace rfsic::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitIllPosed = 4;

// Entry point of the `rfsic` executable, with injectable streams for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rfsic::cli
