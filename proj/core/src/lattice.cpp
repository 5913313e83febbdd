#include "annulus/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace annulus {
namespace {

// Exact-enough comparison of an integer squared norm n against the two
// boundary circles. With D = n - R^2 - 1/2 the annulus condition reads
// |D| < sqrt(2) R. R^2 is split error-free so that n - R^2 is exact.
class BoundaryTest {
 public:
  explicit BoundaryTest(double radius)
      : radius_(radius),
        r2_hi_(static_cast<long double>(radius) * radius),
        r2_lo_(std::fmal(radius, radius, -r2_hi_)),
        half_width_(std::sqrt(2.0L) * radius),
        margin_(64.0L * std::numeric_limits<long double>::epsilon() *
                (half_width_ + 1.0L)) {}

  long double offset(std::int64_t n) const {
    return (static_cast<long double>(n) - r2_hi_) - r2_lo_ - 0.5L;
  }

  bool above_inner(std::int64_t n) const { return check(offset(n) + half_width_); }
  bool below_outer(std::int64_t n) const { return check(half_width_ - offset(n)); }

 private:
  // Lattice norms never sit on a boundary circle; refuse to guess when
  // rounding cannot tell.
  bool check(long double signed_gap) const {
    if (std::fabs(signed_gap) <= margin_) {
      throw std::runtime_error(
          "lattice point within rounding distance of the annulus boundary at R=" +
          std::to_string(radius_));
    }
    return signed_gap > 0;
  }

  double radius_;
  long double r2_hi_;
  long double r2_lo_;
  long double half_width_;
  long double margin_;
};

AnnulusPoint make_point(std::int64_t x, std::int64_t y, double radius) {
  AnnulusPoint p;
  p.point = {x, y};
  const auto n = p.point.norm2();
  p.norm = static_cast<double>(std::sqrt(static_cast<long double>(n)));
  const auto polar_coords = polar(p.point, radius);
  p.r = polar_coords.r;
  p.theta = polar_coords.theta;
  return p;
}

std::int64_t isqrt_floor(long double v) {
  if (v <= 0) return 0;
  return static_cast<std::int64_t>(std::floor(std::sqrt(v)));
}

}  // namespace

GammaList::GammaList(double radius, std::vector<AnnulusPoint> points)
    : radius_(radius), points_(std::move(points)) {
  thetas_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    points_[i].index = i;
    thetas_.push_back(points_[i].theta);
  }
}

double GammaList::expected_count() const {
  return std::sqrt(8.0) * std::numbers::pi * radius_;
}

const AnnulusPoint& GammaList::circular(std::int64_t i) const {
  const auto k = static_cast<std::int64_t>(points_.size());
  return points_[static_cast<std::size_t>(((i % k) + k) % k)];
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double normalized_angle(double y, double x) {
  double t = std::atan2(y, x);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = std::nextafter(kTwoPi, 0.0);
  return t;
}

PolarCoordinates polar(LatticePoint point, double radius) {
  if (point.x == 0 && point.y == 0) {
    throw std::domain_error("polar: the origin has no angle");
  }
  const auto n = point.norm2();
  const long double r2_hi = static_cast<long double>(radius) * radius;
  const long double r2_lo = std::fmal(radius, radius, -r2_hi);
  const long double excess = (static_cast<long double>(n) - r2_hi) - r2_lo;
  const long double r = excess / (std::sqrt(static_cast<long double>(n)) + radius);
  return {static_cast<double>(r),
          normalized_angle(static_cast<double>(point.y), static_cast<double>(point.x))};
}

GammaList enumerate_gamma_unchecked(double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw std::domain_error("enumerate_gamma: R must be positive and finite");
  }
  if (radius > kMaxRadius) {
    throw ResourceLimitError("enumerate_gamma: R too large (limit 1e8), got " +
                             std::to_string(radius));
  }
  const BoundaryTest boundary(radius);
  const double outer = radius + kHalfWidth;
  const double inner = radius - kHalfWidth;
  const auto x_max = static_cast<std::int64_t>(std::floor(outer));

  std::vector<AnnulusPoint> points;
  points.reserve(static_cast<std::size_t>(9.0 * radius + 16));

  const long double outer2 = static_cast<long double>(outer) * outer;
  const long double inner2 = inner > 0 ? static_cast<long double>(inner) * inner : 0.0L;

  for (std::int64_t x = -x_max; x <= x_max; ++x) {
    const std::int64_t x2 = x * x;
    // Largest y >= 0 with x^2 + y^2 below the outer circle.
    std::int64_t y_hi = isqrt_floor(outer2 - static_cast<long double>(x2)) + 1;
    while (y_hi >= 0 && !boundary.below_outer(x2 + y_hi * y_hi)) --y_hi;
    if (y_hi < 0) continue;
    while (boundary.below_outer(x2 + (y_hi + 1) * (y_hi + 1))) ++y_hi;

    // Smallest y >= 0 beyond the inner circle.
    std::int64_t y_lo = 0;
    if (!boundary.above_inner(x2)) {
      y_lo = std::max<std::int64_t>(0, isqrt_floor(inner2 - static_cast<long double>(x2)) - 1);
      while (!boundary.above_inner(x2 + y_lo * y_lo)) ++y_lo;
      while (y_lo > 0 && boundary.above_inner(x2 + (y_lo - 1) * (y_lo - 1))) --y_lo;
    }
    for (std::int64_t y = y_lo; y <= y_hi; ++y) {
      points.push_back(make_point(x, y, radius));
      if (y != 0) points.push_back(make_point(x, -y, radius));
    }
  }

  std::sort(points.begin(), points.end(), [](const AnnulusPoint& a, const AnnulusPoint& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.point.norm2() < b.point.norm2();
  });
  return GammaList(radius, std::move(points));
}

GammaList enumerate_gamma(double radius) {
  if (!(radius > 1.0)) {
    throw std::domain_error("enumerate_gamma: requires R > 1");
  }
  return enumerate_gamma_unchecked(radius);
}

bool in_angular_window(double theta, double start, double length) {
  if (length >= kTwoPi) return true;
  if (!(length > 0)) return false;
  const double s = wrap_angle(start);
  const double e = s + length;
  if (e <= kTwoPi) return theta >= s && theta < e;
  return theta >= s || theta < e - kTwoPi;
}

std::vector<IndexRange> angular_window_ranges(const GammaList& gamma, double start,
                                              double length) {
  const auto th = gamma.thetas();
  if (length >= kTwoPi) return {{0, th.size()}};
  if (!(length > 0)) return {};
  auto lb = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(th.begin(), th.end(), v) - th.begin());
  };
  const double s = wrap_angle(start);
  const double e = s + length;
  if (e <= kTwoPi) return {{lb(s), lb(e)}};
  return {{lb(s), th.size()}, {0, lb(e - kTwoPi)}};
}

std::size_t sector_count(const GammaList& gamma, double theta1, double theta2,
                         std::optional<Interval> band) {
  double length = theta2 - theta1;
  if (length < 0) length = std::fmod(length, kTwoPi) + kTwoPi;
  std::size_t count = 0;
  for (const auto& range : angular_window_ranges(gamma, theta1, length)) {
    if (!band) {
      count += range.last - range.first;
      continue;
    }
    for (std::size_t i = range.first; i < range.last; ++i) {
      if (band->contains(gamma[i].r)) ++count;
    }
  }
  return count;
}

double NeighborStats::frac_small_gaps(double c) const {
  if (sorted_gaps.empty()) return 0.0;
  const double threshold = c / (radius * radius);
  const auto it = std::upper_bound(sorted_gaps.begin(), sorted_gaps.end(), threshold);
  return static_cast<double>(it - sorted_gaps.begin()) /
         static_cast<double>(sorted_gaps.size());
}

NeighborStats neighbor_stats(const GammaList& gamma) {
  const auto k = gamma.size();
  if (k < 2) throw std::domain_error("neighbor_stats: needs at least two points");
  NeighborStats stats;
  stats.radius = gamma.radius();
  stats.sorted_gaps.reserve(k);
  double max_gap = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_dist = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& a = gamma[j];
    const auto& b = gamma[(j + 1) % k];
    double gap = b.theta - a.theta;
    if (j + 1 == k) gap += kTwoPi;
    stats.sorted_gaps.push_back(gap);
    max_gap = std::max(max_gap, gap);
    min_gap = std::min(min_gap, gap);
    const double dx = static_cast<double>(b.point.x - a.point.x);
    const double dy = static_cast<double>(b.point.y - a.point.y);
    max_dist = std::max(max_dist, std::hypot(dx, dy));
  }
  std::sort(stats.sorted_gaps.begin(), stats.sorted_gaps.end());
  const double r = gamma.radius();
  stats.max_gap_times_r = max_gap * r;
  stats.min_gap_times_r2 = min_gap * r * r;
  stats.max_neighbor_distance = max_dist;
  return stats;
}

void write_csv(const GammaList& gamma, std::ostream& out) {
  out << "x,y,norm,r,theta,index\n";
  char buf[160];
  for (const auto& p : gamma.points()) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%zu\n",
                  static_cast<long long>(p.point.x), static_cast<long long>(p.point.y),
                  p.norm, p.r, p.theta, p.index + 1);
    out << buf;
  }
}

}  // namespace annulus
