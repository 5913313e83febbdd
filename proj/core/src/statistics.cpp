#include "annulus/statistics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "annulus/geometry.hpp"
#include "annulus/rng.hpp"
#include "parallel.hpp"

namespace annulus {
namespace {

void require_series(const AreaSeries& series, std::size_t min_size, const char* who) {
  if (series.size() < min_size) {
    throw std::domain_error(std::string(who) + ": series has " + std::to_string(series.size()) +
                            " values, needs " + std::to_string(min_size));
  }
}

void require_matching(const GammaList& gamma, const AreaSeries& series, const char* who) {
  if (gamma.size() != series.size()) {
    throw std::domain_error(std::string(who) + ": series does not match the lattice list");
  }
}

long double lag_sum(const std::vector<double>& a, std::size_t k) {
  const std::size_t n = a.size();
  long double sum = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t m = j + k;
    if (m >= n) m -= n;
    sum += static_cast<long double>(a[j]) * a[m];
  }
  return sum;
}

std::size_t bin_of(double v, double lo, double hi, int bins) {
  const double u = (v - lo) / (hi - lo) * bins;
  return static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(u)), 0, bins - 1));
}

}  // namespace

AreaSeries area_series(const GammaList& gamma, unsigned threads) {
  AreaSeries series;
  series.radius = gamma.radius();
  series.values.resize(gamma.size());
  constexpr std::size_t chunk = 1 << 14;
  const std::size_t chunks = (gamma.size() + chunk - 1) / chunk;
  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(gamma.size(), (c + 1) * chunk);
    for (std::size_t j = c * chunk; j < end; ++j) {
      series.values[j] = area_disc_square(gamma[j].point, gamma.radius());
    }
  });
  return series;
}

MeanVariance expectation_variance(const AreaSeries& series) {
  require_series(series, 2, "expectation_variance");
  long double sum = 0.0L;
  for (double v : series.values) sum += v;
  const long double mean = sum / series.size();
  long double sq = 0.0L;
  for (double v : series.values) sq += (v - mean) * (v - mean);
  return {static_cast<double>(mean), static_cast<double>(sq / series.size())};
}

CorrelationEstimate empirical_ck(const AreaSeries& series, std::int64_t k) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (k < 0 || k >= n) {
    throw std::domain_error("empirical_ck: k must satisfy 0 <= k < K (K = " + std::to_string(n) +
                            ")");
  }
  const long double sum = lag_sum(series.values, static_cast<std::size_t>(k));
  return {static_cast<double>(sum / n - 0.25L), 0.0, n};
}

double ck_average(const AreaSeries& series, std::int64_t L) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (L < 1 || L >= n) throw std::domain_error("ck_average: L must satisfy 1 <= L < K");
  long double total = 0.0L;
  for (std::int64_t k = 1; k <= L; ++k) total += empirical_ck(series, k).value;
  return static_cast<double>(total / L);
}

namespace detail {
PairWindow pair_window(const GammaList& gamma, std::int64_t k) {
  if (k < 1) throw std::domain_error("pair window: k must be >= 1");
  const double cal_k = gamma.expected_count();
  return {static_cast<double>(k) / cal_k, (static_cast<double>(k) + kTwoPi) / cal_k};
}
}  // namespace detail

bool pair_in_window(double theta_lambda, double theta_mu, double lo, double hi) {
  double d = theta_lambda - theta_mu;
  if (d < 0) d += kTwoPi;
  return d >= lo && d < hi;
}

double mixed_corr_sum(const GammaList& gamma, const AreaSeries& series, std::int64_t k) {
  require_matching(gamma, series, "mixed_corr_sum");
  const auto k_max = static_cast<std::int64_t>(std::floor(std::sqrt(gamma.radius())));
  if (k < 1 || k > k_max) {
    throw std::domain_error("mixed_corr_sum: k must satisfy 1 <= k <= floor(sqrt R) = " +
                            std::to_string(k_max));
  }
  long double sum = 0.0L;
  for_each_pair(gamma, k, [&](std::size_t i, std::size_t m) {
    sum += (series.values[i] - 0.5) * (series.values[m] - 0.5);
  });
  return static_cast<double>(sum / gamma.expected_count());
}

double pair_corr_count(const GammaList& gamma, std::int64_t k, const Interval& i1,
                       const Interval& i2, const Interval& j) {
  validate_radial(i1, "pair_corr_count I1");
  validate_radial(i2, "pair_corr_count I2");
  validate(j, "pair_corr_count J");
  if (j.a < 0 || j.b > kTwoPi) {
    throw std::domain_error("pair_corr_count: J must lie inside [0, 2 pi]");
  }
  if (k < 1) throw std::domain_error("pair_corr_count: k must be >= 1");
  if (j.empty()) return 0.0;
  std::uint64_t count = 0;
  for_each_pair(gamma, k, [&](std::size_t i, std::size_t m) {
    const auto& lam = gamma[i];
    if (i1.contains(lam.r) && i2.contains(gamma[m].r) && j.contains(lam.theta)) ++count;
  });
  return static_cast<double>(count) / gamma.expected_count();
}

double mean_pair_count(const GammaList& gamma, std::int64_t k) {
  if (gamma.empty()) return 0.0;
  std::uint64_t count = 0;
  for_each_pair(gamma, k, [&](std::size_t, std::size_t) { ++count; });
  return static_cast<double>(count) / static_cast<double>(gamma.size());
}

JointMoments windowed_joint_moments(const GammaList& gamma, const AreaSeries& series,
                                    std::int64_t M, std::int64_t L) {
  require_matching(gamma, series, "windowed_joint_moments");
  const auto n = static_cast<std::int64_t>(series.size());
  if (M < 1 || L < std::sqrt(static_cast<double>(M)) || L > M || M + L >= n) {
    throw std::domain_error(
        "windowed_joint_moments: requires M >= 1, sqrt(M) <= L <= M and M + L < K");
  }
  const auto& a = series.values;
  // Circular prefix sums over two copies of the series.
  std::vector<long double> prefix(2 * a.size() + 1, 0.0L);
  for (std::size_t i = 0; i < 2 * a.size(); ++i) prefix[i + 1] = prefix[i] + a[i % a.size()];

  long double sum1 = 0.0L;
  long double sum2 = 0.0L;
  long double prod = 0.0L;
  const auto width = static_cast<long double>(L + 1);
  for (std::int64_t j = 0; j < n; ++j) {
    const long double window = prefix[j + M + L + 1] - prefix[j + M];
    sum1 += a[j] * width;
    sum2 += window;
    prod += a[j] * window;
  }
  const long double terms = static_cast<long double>(n) * width;
  return {static_cast<double>(sum1 / terms), static_cast<double>(sum2 / terms),
          static_cast<double>(prod / terms)};
}

double chi_square_p_value(double statistic, double dof) {
  if (!(dof > 0)) return 1.0;
  if (!(statistic > 0)) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts) {
  ChiSquare out;
  if (counts.empty()) return out;
  long double total = 0.0L;
  for (auto c : counts) total += c;
  out.dof = static_cast<double>(counts.size() - 1);
  if (total == 0.0L) return out;
  const long double expected = total / counts.size();
  long double stat = 0.0L;
  for (auto c : counts) stat += (c - expected) * (c - expected) / expected;
  out.statistic = static_cast<double>(stat);
  out.p_value = chi_square_p_value(out.statistic, out.dof);
  return out;
}

double kolmogorov_p_value(double statistic, double effective_n) {
  if (!(effective_n > 0) || !(statistic > 0)) return 1.0;
  const double root = std::sqrt(effective_n);
  const double lambda = (root + 0.12 + 0.11 / root) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  KsResult out;
  if (a.empty() || b.empty()) return out;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  out.statistic = d;
  out.p_value = kolmogorov_p_value(d, na * nb / (na + nb));
  return out;
}

KsResult ks_uniform(std::vector<double> sample, double lo, double hi) {
  KsResult out;
  if (sample.empty()) return out;
  if (!(hi > lo)) throw std::domain_error("ks_uniform: requires lo < hi");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = std::clamp((sample[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  out.statistic = d;
  out.p_value = kolmogorov_p_value(d, n);
  return out;
}

PairHistogram pair_joint_hist(const GammaList& gamma, std::int64_t k, int bins) {
  if (bins < 4 || bins > 64) throw std::domain_error("pair_joint_hist: bins must be in [4, 64]");
  PairHistogram hist;
  hist.bins = bins;
  hist.counts.assign(static_cast<std::size_t>(bins) * bins * bins, 0);
  std::vector<double> r_lambda;
  for_each_pair(gamma, k, [&](std::size_t i, std::size_t m) {
    const auto& lam = gamma[i];
    const std::size_t a = bin_of(lam.r, -kHalfWidth, kHalfWidth, bins);
    const std::size_t t = bin_of(lam.theta, 0.0, kTwoPi, bins);
    const std::size_t b = bin_of(gamma[m].r, -kHalfWidth, kHalfWidth, bins);
    ++hist.counts[(a * bins + t) * bins + b];
    r_lambda.push_back(lam.r);
  });
  hist.pairs = r_lambda.size();
  hist.chi_square = chi_square_uniform(hist.counts);
  hist.r_marginal = ks_uniform(std::move(r_lambda), -kHalfWidth, kHalfWidth);
  return hist;
}

std::vector<double> sample_a_inf(std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw std::domain_error("sample_a_inf: n must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n));
  CounterRng rng(seed, 0);
  for (auto& v : out) {
    const double r = (2.0 * rng.uniform() - 1.0) * kHalfWidth;
    const double theta = kTwoPi * rng.uniform();
    v = a_inf(r, theta);
  }
  return out;
}

KsResult limit_distribution_test(const AreaSeries& series, std::int64_t n_model,
                                 std::uint64_t seed) {
  if (n_model < 100000) throw std::domain_error("limit_distribution_test: n_model must be >= 1e5");
  require_series(series, 1, "limit_distribution_test");
  return ks_two_sample(series.values, sample_a_inf(n_model, seed));
}

ChiSquare polar_uniformity(const GammaList& gamma, int bins) {
  if (bins < 2) throw std::domain_error("polar_uniformity: bins must be >= 2");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins) * bins, 0);
  for (const auto& p : gamma.points()) {
    ++counts[bin_of(p.r, -kHalfWidth, kHalfWidth, bins) * bins + bin_of(p.theta, 0.0, kTwoPi, bins)];
  }
  return chi_square_uniform(counts);
}

}  // namespace annulus
