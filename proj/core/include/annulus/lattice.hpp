#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "annulus/interval.hpp"

namespace annulus {

/// Largest radius enumerate_gamma() accepts.
inline constexpr double kMaxRadius = 1e8;

/// Thrown when a request would exceed a resource guard (radius, sample
/// count, model truncation). Nothing is ever silently truncated.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  std::int64_t norm2() const { return x * x + y * y; }
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// A lattice point of the annulus with its shifted polar coordinates,
/// lambda = (R + r) e^{i theta}.
struct AnnulusPoint {
  LatticePoint point;
  double norm = 0.0;
  double r = 0.0;
  double theta = 0.0;
  /// Zero-based position in angular order.
  std::size_t index = 0;
};

struct PolarCoordinates {
  double r = 0.0;
  double theta = 0.0;
};

/// Lattice points of the open annulus R - 1/sqrt2 < |x| < R + 1/sqrt2 in
/// nondecreasing angular order (ties broken by increasing norm). Immutable.
class GammaList {
 public:
  GammaList(double radius, std::vector<AnnulusPoint> points);

  double radius() const { return radius_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Area of the annulus, sqrt(8) pi R; the asymptotic value of size().
  double expected_count() const;

  std::span<const AnnulusPoint> points() const { return points_; }
  const AnnulusPoint& operator[](std::size_t i) const { return points_[i]; }

  /// Element at circular index i mod K.
  const AnnulusPoint& circular(std::int64_t i) const;

  /// Sorted angles, aligned with points().
  std::span<const double> thetas() const { return thetas_; }

 private:
  double radius_;
  std::vector<AnnulusPoint> points_;
  std::vector<double> thetas_;
};

/// Enumerates the annulus by scanning each integer column for the (at most
/// two) y-bands allowed by the two circle inequalities. Requires
/// 1 < R <= kMaxRadius; throws ResourceLimitError above the guard and
/// std::domain_error below it.
GammaList enumerate_gamma(double radius);

/// Same enumeration without the R > 1 precondition (any R > 0). Used by the
/// exact-count checks at small radii.
GammaList enumerate_gamma_unchecked(double radius);

/// Shifted polar coordinates of a nonzero lattice point. The radial offset is
/// evaluated as (n - R^2) / (sqrt(n) + R) with n = x^2 + y^2 exact.
PolarCoordinates polar(LatticePoint point, double radius);

/// atan2(y, x) mapped into [0, 2 pi).
double normalized_angle(double y, double x);

/// Reduces an angle into [0, 2 pi).
double wrap_angle(double theta);

/// True when (theta - start) mod 2 pi lies in [0, length). A length of at
/// least 2 pi covers the whole circle.
bool in_angular_window(double theta, double start, double length);

/// Number of points with theta in [theta1, theta2) (mod 2 pi) and, when a
/// band is given, r inside it.
std::size_t sector_count(const GammaList& gamma, double theta1, double theta2,
                         std::optional<Interval> band = std::nullopt);

/// Indices [first, last) ranges of points whose angles fall in the
/// half-open window [start, start + length) mod 2 pi. At most two ranges.
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;
};
std::vector<IndexRange> angular_window_ranges(const GammaList& gamma,
                                              double start, double length);

/// Successive-gap statistics of the circular angular ordering.
struct NeighborStats {
  double max_gap_times_r = 0.0;
  double min_gap_times_r2 = 0.0;
  double max_neighbor_distance = 0.0;
  double radius = 0.0;
  /// Sorted angular gaps theta_{j+1} - theta_j (mod 2 pi).
  std::vector<double> sorted_gaps;

  /// Fraction of gaps not exceeding c / R^2.
  double frac_small_gaps(double c) const;
};

/// Requires at least two points; throws std::domain_error otherwise.
NeighborStats neighbor_stats(const GammaList& gamma);

/// CSV with header x,y,norm,r,theta,index (index is 1-based), 17 significant
/// digits.
void write_csv(const GammaList& gamma, std::ostream& out);

}  // namespace annulus
