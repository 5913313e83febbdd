#include "annulus/interval.hpp"

#include <cmath>
#include <cstdlib>

namespace annulus {

void validate(const Interval& interval, const std::string& what) {
  if (!std::isfinite(interval.a) || !std::isfinite(interval.b)) {
    throw std::domain_error(what + ": interval endpoints must be finite");
  }
  if (interval.a > interval.b) {
    throw std::domain_error(what + ": interval [a,b] requires a <= b");
  }
}

void validate_radial(const Interval& interval, const std::string& what) {
  validate(interval, what);
  constexpr double slack = 1e-15;
  if (interval.a < -kHalfWidth - slack || interval.b > kHalfWidth + slack) {
    throw std::domain_error(what +
                            ": radial interval must lie in [-1/sqrt2, 1/sqrt2]");
  }
}

Interval parse_interval(const std::string& text) {
  const auto sep = text.find_first_of(",:");
  if (sep == std::string::npos) {
    throw std::invalid_argument("interval '" + text + "' must look like a,b");
  }
  auto parse = [&](const std::string& part) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || end != part.c_str() + part.size()) {
      throw std::invalid_argument("interval '" + text +
                                  "' has a non-numeric endpoint");
    }
    return v;
  };
  Interval out{parse(text.substr(0, sep)), parse(text.substr(sep + 1))};
  if (!(out.a <= out.b)) {
    throw std::invalid_argument("interval '" + text + "' requires a <= b");
  }
  return out;
}

}  // namespace annulus
