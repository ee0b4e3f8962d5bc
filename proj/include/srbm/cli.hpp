#pragma once

#include <iosfwd>

namespace srbm {

// Exit codes shared by the CLI surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitUnsupportedDrift = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNumeric = 70;

// Full command-line entry point (subcommands: validate, classify, sweep,
// poles, product-form, density, simulate, compare). Streams are injected so
// tests can capture output; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

} // namespace srbm
