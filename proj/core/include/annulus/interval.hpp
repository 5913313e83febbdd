#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace annulus {

/// Half-width of the annulus around the circle of radius R (1/sqrt 2).
inline constexpr double kHalfWidth = 0.70710678118654752440;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Closed interval [a, b]. Used both for radial bands I inside
/// [-1/sqrt2, 1/sqrt2] and for angular windows J (radians).
struct Interval {
  double a = 0.0;
  double b = 0.0;

  constexpr double length() const { return b - a; }
  constexpr bool contains(double x) const { return a <= x && x <= b; }
  constexpr bool empty() const { return !(a < b); }

  /// The full radial range [-1/sqrt2, 1/sqrt2].
  static constexpr Interval full_radial() { return {-kHalfWidth, kHalfWidth}; }
  static constexpr Interval full_circle() { return {0.0, kTwoPi}; }
};

/// Throws std::domain_error unless a <= b and both endpoints are finite.
void validate(const Interval& interval, const std::string& what);

/// As validate(), and additionally requires [a, b] inside the radial range.
void validate_radial(const Interval& interval, const std::string& what);

/// Parses "a,b" or "a:b" into an Interval. Throws std::invalid_argument.
Interval parse_interval(const std::string& text);

}  // namespace annulus
