#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "spectralgap/cli.hpp"
#include "spectralgap/errors.hpp"

namespace spectralgap::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw PreconditionError("not a finite number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.size() != 3) throw PreconditionError("range grid must be lo:hi:count, got '" + spec + "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double cnt = parse_number(parts[2]);
    if (cnt < 1 || cnt != std::floor(cnt)) throw PreconditionError("grid count must be a positive integer");
    const auto n = static_cast<std::size_t>(cnt);
    if (n == 1) return {lo};
    for (std::size_t i = 0; i < n; ++i) {
      // Endpoints exact; interior points by the same expression every run.
      out.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
  }
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse_number(tok));
  if (out.empty()) throw PreconditionError("empty grid");
  return out;
}

}  // namespace spectralgap::cli
