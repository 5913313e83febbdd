#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "annulus/interval.hpp"
#include "annulus/lattice.hpp"

namespace annulus {

/// Fourier transform of the indicator of [a, b] at xi:
/// integral_a^b e(-t xi) dt with e(x) = exp(2 pi i x). For |xi| < 1e-12 a
/// Taylor expansion around xi = 0 is used.
std::complex<double> chi_hat(const Interval& interval, double xi);

/// r2(n), the number of representations n = a^2 + b^2, for n = 0..n_max,
/// from a divisor sieve r2(n) = 4 (d_1(n) - d_3(n)).
std::vector<std::int64_t> r2_table(std::int64_t n_max);

struct DTruncation {
  double lambda_max = 0.0;
  double value = 0.0;
  /// Upper bound for the omitted part of the lattice sum.
  double tail_bound = 0.0;
};

/// Largest lambda_max accepted by d_of_i().
inline constexpr double kMaxLambda = 1e4;

/// (1 / 2 pi^2) sum over 0 < |lambda| <= lambda_max of
/// |chi_hat_I(|lambda|)|^2 / |lambda|, grouped by n = |lambda|^2 with weight
/// r2(n). tail_bound = (1 + 2/L) / (pi^3 L), from |chi_hat| <= 1/(pi xi)
/// and sum_{|lambda| > L} |lambda|^-3 <= 2 pi (1 + 2/L) / L.
/// Requires 10 <= lambda_max <= kMaxLambda and I inside the radial range.
DTruncation d_of_i(const Interval& interval, double lambda_max);

/// Smallest truncation whose tail bound is below `tolerance`.
double lambda_for_tail(double tolerance);

/// Default theta grid for sector_variance_empirical(): clamp(ceil(4 calK),
/// 1e3, 1e6), so that consecutive grid angles are closer than the typical
/// gap between lattice angles.
std::int64_t default_sector_grid(double radius);

/// Counts N_theta = #{lambda : r in I, (theta_lambda - theta) mod 2 pi in
/// [0, width)} for theta = g (pi/2) / grid, g = 0..grid-1.
std::vector<std::int64_t> sector_counts(const GammaList& gamma, const Interval& interval,
                                        double width, std::int64_t grid);

/// Mean of (N_theta - R width |I|)^2 over the grid. Requires
/// 1/R <= width <= R^-0.9, grid >= 1e3 and I inside the radial range.
double sector_variance_empirical(const GammaList& gamma, const Interval& interval, double width,
                                 std::int64_t grid);
double sector_variance_empirical(double radius, const Interval& interval, double width,
                                 std::int64_t grid);

struct EquidistCheck {
  std::int64_t count = 0;
  double main_term = 0.0;
  double normalized_error = 0.0;
};

/// Points with theta in [c, d) (mod 2 pi) and r in I against
/// 2 pi sqrt2 R ((d - c)/2 pi)(|I|/sqrt2); the error is scaled by
/// (d - c)^{1/3} R^{2/3}. Requires R^{-1/2} <= d - c <= 2 pi.
EquidistCheck equidist_count_check(const GammaList& gamma, double c, double d,
                                   const Interval& interval);
EquidistCheck equidist_count_check(double radius, double c, double d, const Interval& interval);

}  // namespace annulus
