#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spectralgap::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitPrecondition = 2;

/// Entry point behind the `spectralgap` binary. Tables go to `out` (or the
/// --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Grid spec: "v" | "v1,v2,..." | "lo:hi:count" (inclusive linspace).
std::vector<double> parse_grid(const std::string& spec);

/// 17 significant digits, "nan"/"inf" spelled out; byte-stable across runs.
std::string format_double(double x);

}  // namespace spectralgap::cli
