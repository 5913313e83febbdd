#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "annulus/estimate.hpp"
#include "annulus/interval.hpp"
#include "annulus/lattice.hpp"

namespace annulus {

/// Boundary areas A_R(lambda_j) in the angular order of a GammaList.
struct AreaSeries {
  double radius = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

AreaSeries area_series(const GammaList& gamma, unsigned threads = 0);

struct MeanVariance {
  double mean = 0.0;
  /// Population variance about the mean.
  double variance = 0.0;
};

/// Requires at least two values.
MeanVariance expectation_variance(const AreaSeries& series);

/// (1/K) sum_j (A_j A_{j+k mod K} - 1/4); std_error = 0, n = K.
/// Requires 0 <= k < K.
CorrelationEstimate empirical_ck(const AreaSeries& series, std::int64_t k);

/// Mean of empirical_ck(k) over k = 1..L. Requires 1 <= L < K.
double ck_average(const AreaSeries& series, std::int64_t L);

/// Ordered pairs (lambda, mu) whose angle difference
/// (theta_lambda - theta_mu) mod 2 pi lies in [k/calK, (k + 2 pi)/calK),
/// with calK = sqrt8 pi R. `visit(i, m)` is called with the indices of
/// lambda and mu. Candidates come from a binary search on the sorted angles;
/// membership is decided by the same predicate as pair_in_window(), so the
/// result equals a double loop over all pairs.
template <class Visit>
void for_each_pair(const GammaList& gamma, std::int64_t k, Visit&& visit);

/// The pair-window predicate used by for_each_pair().
bool pair_in_window(double theta_lambda, double theta_mu, double lo, double hi);

/// (1/calK) sum over window pairs of (A_lambda - 1/2)(A_mu - 1/2).
/// Requires 1 <= k <= floor(sqrt R).
double mixed_corr_sum(const GammaList& gamma, const AreaSeries& series, std::int64_t k);

/// (1/calK) #{window pairs : r_lambda in I1, r_mu in I2, theta_lambda in J}.
/// A degenerate J (a == b) counts nothing. Requires k >= 1, I1 and I2
/// inside [-1/sqrt2, 1/sqrt2] and J inside [0, 2 pi].
double pair_corr_count(const GammaList& gamma, std::int64_t k, const Interval& i1,
                       const Interval& i2, const Interval& j);

/// Mean number of window partners per lattice point, (1/K) #{pairs}.
double mean_pair_count(const GammaList& gamma, std::int64_t k);

struct JointMoments {
  double mean1 = 0.0;
  double mean2 = 0.0;
  double product_mean = 0.0;
};

/// Moments of (A_j, A_{j+k}) averaged over all j and k in [M, M + L].
/// Requires M >= 1, sqrt(M) <= L <= M, M + L < K and a series that matches
/// the GammaList.
JointMoments windowed_joint_moments(const GammaList& gamma, const AreaSeries& series,
                                    std::int64_t M, std::int64_t L);

struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Upper-tail p-value of the chi-square distribution.
double chi_square_p_value(double statistic, double dof);

/// Pearson statistic of observed counts against equal expected counts.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts);

struct KsResult {
  double statistic = 0.0;
  /// Asymptotic Kolmogorov p-value.
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov survival function for an effective sample size.
double kolmogorov_p_value(double statistic, double effective_n);

/// Two-sample Kolmogorov-Smirnov distance. Tied values are stepped over
/// together, so the statistic is exact with ties. Inputs need not be sorted.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS distance against the uniform law on [lo, hi].
KsResult ks_uniform(std::vector<double> sample, double lo, double hi);

struct PairHistogram {
  int bins = 0;
  /// bins^3 cells, index (i_r1 * bins + i_theta) * bins + i_r2.
  std::vector<std::uint64_t> counts;
  std::uint64_t pairs = 0;
  /// Against the uniform product law on [-1/sqrt2,1/sqrt2] x [0,2pi) x
  /// [-1/sqrt2,1/sqrt2]. Zero pairs give statistic 0 and p-value 1.
  ChiSquare chi_square;
  /// KS distance of the r_lambda marginal from uniform.
  KsResult r_marginal;
};

/// Histogram of (r_lambda, theta_lambda, r_mu) over window pairs.
/// Requires 4 <= bins <= 64 and k >= 1.
PairHistogram pair_joint_hist(const GammaList& gamma, std::int64_t k, int bins);

/// Two-sample KS between the series and n_model draws of a_inf(r, theta)
/// with (r, theta) uniform on G. Requires n_model >= 1e5.
KsResult limit_distribution_test(const AreaSeries& series, std::int64_t n_model,
                                 std::uint64_t seed);

/// n draws of a_inf(r, theta), (r, theta) uniform on G.
std::vector<double> sample_a_inf(std::int64_t n, std::uint64_t seed);

/// Chi-square of the (r, theta) pairs of the annulus on a bins x bins grid
/// of G against the uniform law.
ChiSquare polar_uniformity(const GammaList& gamma, int bins = 16);

// ---------------------------------------------------------------------------

namespace detail {
struct PairWindow {
  double lo;
  double hi;
};
PairWindow pair_window(const GammaList& gamma, std::int64_t k);
}  // namespace detail

template <class Visit>
void for_each_pair(const GammaList& gamma, std::int64_t k, Visit&& visit) {
  const auto window = detail::pair_window(gamma, k);
  const auto th = gamma.thetas();
  // Search margin well above the rounding of the wrapped differences.
  constexpr double slack = 1e-9;
  const double span = window.hi - window.lo + 2 * slack;
  for (std::size_t i = 0; i < th.size(); ++i) {
    const double start = th[i] - window.hi - slack;
    for (const auto& range : angular_window_ranges(gamma, start, span)) {
      for (std::size_t m = range.first; m < range.last; ++m) {
        if (pair_in_window(th[i], th[m], window.lo, window.hi)) visit(i, m);
      }
    }
  }
}

}  // namespace annulus
