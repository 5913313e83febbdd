#include "annulus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace annulus {
namespace {

constexpr double kPi = std::numbers::pi;

void check_width(double radius, double width) {
  const double lo = 1.0 / radius;
  const double hi = std::pow(radius, -0.9);
  if (!(width >= lo && width <= hi)) {
    throw std::domain_error("sector_variance_empirical: width must lie in [1/R, R^-0.9] = [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                            std::to_string(width));
  }
}

}  // namespace

std::complex<double> chi_hat(const Interval& interval, double xi) {
  const double a = interval.a;
  const double b = interval.b;
  if (std::fabs(xi) < 1e-12) {
    // sum_n (-2 pi i xi)^n (b^{n+1} - a^{n+1}) / (n + 1)!
    std::complex<double> sum = 0.0;
    std::complex<double> factor = 1.0;
    const std::complex<double> z(0.0, -2.0 * kPi * xi);
    double fact = 1.0;
    for (int n = 0; n < 4; ++n) {
      fact *= (n + 1);
      sum += factor * (std::pow(b, n + 1) - std::pow(a, n + 1)) / fact;
      factor *= z;
    }
    return sum;
  }
  // e(-(a+b) xi / 2) sin(pi (b - a) xi) / (pi xi)
  const double magnitude = std::sin(kPi * (b - a) * xi) / (kPi * xi);
  return std::polar(1.0, -kPi * (a + b) * xi) * magnitude;
}

std::vector<std::int64_t> r2_table(std::int64_t n_max) {
  if (n_max < 0) throw std::domain_error("r2_table: n_max must be >= 0");
  std::vector<std::int64_t> r2(static_cast<std::size_t>(n_max) + 1, 0);
  for (std::int64_t d = 1; d <= n_max; d += 2) {
    const std::int64_t sign = d % 4 == 1 ? 4 : -4;
    for (std::int64_t m = d; m <= n_max; m += d) r2[m] += sign;
  }
  r2[0] = 1;
  return r2;
}

DTruncation d_of_i(const Interval& interval, double lambda_max) {
  validate_radial(interval, "d_of_i");
  if (!(lambda_max >= 10)) throw std::domain_error("d_of_i: lambda_max must be >= 10");
  if (lambda_max > kMaxLambda) throw ResourceLimitError("d_of_i: lambda_max above 1e4");
  const auto n_max = static_cast<std::int64_t>(std::floor(lambda_max * lambda_max));
  const auto r2 = r2_table(n_max);
  long double sum = 0.0L;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (r2[n] == 0) continue;
    const double xi = std::sqrt(static_cast<double>(n));
    sum += static_cast<long double>(r2[n]) * std::norm(chi_hat(interval, xi)) / xi;
  }
  DTruncation out;
  out.lambda_max = lambda_max;
  out.value = static_cast<double>(sum / (2.0L * kPi * kPi));
  out.tail_bound = (1.0 + 2.0 / lambda_max) / (kPi * kPi * kPi * lambda_max);
  return out;
}

double lambda_for_tail(double tolerance) {
  if (!(tolerance > 0)) throw std::domain_error("lambda_for_tail: tolerance must be positive");
  const double p = kPi * kPi * kPi * tolerance;
  // Root of p L^2 - L - 2 = 0.
  const double root = (1.0 + std::sqrt(1.0 + 8.0 * p)) / (2.0 * p);
  return std::max(10.0, std::ceil(root));
}

std::int64_t default_sector_grid(double radius) {
  const double cal_k = std::sqrt(8.0) * kPi * radius;
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(4.0 * cal_k)), 1000,
                                  1000000);
}

std::vector<std::int64_t> sector_counts(const GammaList& gamma, const Interval& interval,
                                        double width, std::int64_t grid) {
  validate_radial(interval, "sector_counts");
  if (grid < 1) throw std::domain_error("sector_counts: grid must be >= 1");
  if (!(width > 0) || width >= kTwoPi) {
    throw std::domain_error("sector_counts: width must lie in (0, 2 pi)");
  }
  // Angles of the points in the band, still sorted.
  std::vector<double> th;
  th.reserve(gamma.size());
  for (const auto& p : gamma.points()) {
    if (interval.contains(p.r)) th.push_back(p.theta);
  }
  auto lb = [&](double v) {
    return static_cast<std::int64_t>(std::lower_bound(th.begin(), th.end(), v) - th.begin());
  };
  const auto total = static_cast<std::int64_t>(th.size());
  std::vector<std::int64_t> counts(static_cast<std::size_t>(grid));
  for (std::int64_t g = 0; g < grid; ++g) {
    const double start = static_cast<double>(g) * (kPi / 2) / static_cast<double>(grid);
    const double end = start + width;
    if (end <= kTwoPi) {
      counts[g] = lb(end) - lb(start);
    } else {
      counts[g] = (total - lb(start)) + lb(end - kTwoPi);
    }
  }
  return counts;
}

double sector_variance_empirical(const GammaList& gamma, const Interval& interval, double width,
                                 std::int64_t grid) {
  check_width(gamma.radius(), width);
  if (grid < 1000) throw std::domain_error("sector_variance_empirical: grid must be >= 1e3");
  if (grid > 100000000) throw ResourceLimitError("sector_variance_empirical: grid above 1e8");
  const auto counts = sector_counts(gamma, interval, width, grid);
  const double expected = gamma.radius() * width * interval.length();
  long double sum = 0.0L;
  for (auto c : counts) {
    const long double dev = static_cast<long double>(c) - expected;
    sum += dev * dev;
  }
  return static_cast<double>(sum / grid);
}

double sector_variance_empirical(double radius, const Interval& interval, double width,
                                 std::int64_t grid) {
  check_width(radius, width);
  return sector_variance_empirical(enumerate_gamma(radius), interval, width, grid);
}

EquidistCheck equidist_count_check(const GammaList& gamma, double c, double d,
                                   const Interval& interval) {
  validate_radial(interval, "equidist_count_check");
  const double radius = gamma.radius();
  const double length = d - c;
  if (!(length >= 1.0 / std::sqrt(radius)) || length > kTwoPi) {
    throw std::domain_error("equidist_count_check: d - c must lie in [R^-1/2, 2 pi]");
  }
  EquidistCheck out;
  out.count = static_cast<std::int64_t>(sector_count(gamma, c, d, interval));
  out.main_term = 2.0 * kPi * std::sqrt(2.0) * radius * (length / kTwoPi) *
                  (interval.length() / std::sqrt(2.0));
  out.normalized_error = std::fabs(static_cast<double>(out.count) - out.main_term) /
                         (std::cbrt(length) * std::pow(radius, 2.0 / 3.0));
  return out;
}

EquidistCheck equidist_count_check(double radius, double c, double d, const Interval& interval) {
  return equidist_count_check(enumerate_gamma(radius), c, d, interval);
}

}  // namespace annulus
