#pragma once

#include <cstdint>
#include <iosfwd>

namespace kahler {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr int kCertificationSamples = 10;

/// Entry point of the `kahler` tool. Reports go to `out` unless an output path is configured
/// (--output or KAHLER_OUTPUT); diagnostics go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kahler
