#include "annulus/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "annulus/geometry.hpp"
#include "annulus/rng.hpp"
#include "parallel.hpp"

namespace annulus {
namespace {

constexpr int kStrata = 256;
constexpr std::int64_t kBlockSize = 1 << 16;
constexpr std::int64_t kMaxSamples = 4'000'000'000LL;

void check_params(double r, double theta, const char* who) {
  if (!(std::fabs(r) <= kHalfWidth + kBoundaryFlag) || !std::isfinite(theta)) {
    throw std::domain_error(std::string(who) +
                            ": (r, theta) must lie in G = [-1/sqrt2, 1/sqrt2] x R");
  }
}

void check_k(int k, const char* who) {
  if (k < 1) throw std::domain_error(std::string(who) + ": k must be >= 1");
  if (k > kMaxModelIndex) {
    throw ResourceLimitError(std::string(who) + ": k above the limit 1e6");
  }
}

bool model_less(const ModelPoint& a, const ModelPoint& b) {
  if (a.t != b.t) return a.t < b.t;
  if (a.rho != b.rho) return a.rho < b.rho;
  return a.kappa < b.kappa;
}

// Appends the strip points with t in (t0, t1], sorted. The strip is
// rasterized along whichever axis is closer to the long side so that each
// column holds at most two or three candidates.
void scan_window(double r, double theta, double t0, double t1, std::vector<ModelPoint>& out) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double lo = r - kHalfWidth - kBoundaryFlag;
  const double hi = r + kHalfWidth + kBoundaryFlag;

  auto consider = [&](std::int64_t x, std::int64_t y, std::vector<ModelPoint>& dst) {
    const double xd = static_cast<double>(x);
    const double yd = static_cast<double>(y);
    const double t = xd * c + yd * s;
    if (!(t > t0) || t > t1) return;
    const double rho = -xd * s + yd * c - r;
    const double excess = std::fabs(rho) - kHalfWidth;
    if (excess > kBoundaryFlag) return;
    dst.push_back({{x, y}, t, rho, std::fabs(excess) <= kBoundaryFlag});
  };

  std::vector<ModelPoint> found;
  const bool along_x = std::fabs(c) >= std::fabs(s);
  // Coordinate range of the parallelogram {t in [t0, t1], m in [lo, hi]}
  // on the scan axis; each m-constraint then fixes the other coordinate.
  const double a_t = along_x ? c : s;
  const double a_m = along_x ? -s : c;
  double lo_axis = std::min({t0 * a_t + lo * a_m, t0 * a_t + hi * a_m, t1 * a_t + lo * a_m,
                             t1 * a_t + hi * a_m});
  double hi_axis = std::max({t0 * a_t + lo * a_m, t0 * a_t + hi * a_m, t1 * a_t + lo * a_m,
                             t1 * a_t + hi * a_m});
  const auto first = static_cast<std::int64_t>(std::floor(lo_axis)) - 1;
  const auto last = static_cast<std::int64_t>(std::ceil(hi_axis)) + 1;
  // m = -x s + y c. Scanning x: y = (m + x s) / c. Scanning y: x = (y c - m) / s.
  const double denom = along_x ? c : s;
  for (std::int64_t v = first; v <= last; ++v) {
    const double vd = static_cast<double>(v);
    double w_lo;
    double w_hi;
    if (along_x) {
      w_lo = (lo + vd * s) / denom;
      w_hi = (hi + vd * s) / denom;
    } else {
      w_lo = (vd * c - hi) / denom;
      w_hi = (vd * c - lo) / denom;
    }
    if (w_lo > w_hi) std::swap(w_lo, w_hi);
    const auto w0 = static_cast<std::int64_t>(std::floor(w_lo)) - 1;
    const auto w1 = static_cast<std::int64_t>(std::ceil(w_hi)) + 1;
    for (std::int64_t w = w0; w <= w1; ++w) {
      if (along_x) {
        consider(v, w, found);
      } else {
        consider(w, v, found);
      }
    }
  }
  std::sort(found.begin(), found.end(), model_less);
  out.insert(out.end(), found.begin(), found.end());
}

// Per-k, per-stratum sums of the product samples.
struct StratumSums {
  std::vector<double> count;
  std::vector<double> sum;
  std::vector<double> sumsq;

  explicit StratumSums(std::size_t cells) : count(cells), sum(cells), sumsq(cells) {}

  void merge(const StratumSums& other) {
    for (std::size_t i = 0; i < count.size(); ++i) {
      count[i] += other.count[i];
      sum[i] += other.sum[i];
      sumsq[i] += other.sumsq[i];
    }
  }
};

StratumSums run_block(int k_max, std::int64_t begin, std::int64_t end, std::uint64_t seed,
                      std::uint64_t block) {
  StratumSums sums(static_cast<std::size_t>(k_max + 1) * kStrata);
  CounterRng rng(seed, block);
  for (std::int64_t i = begin; i < end; ++i) {
    const int stratum = static_cast<int>(i % kStrata);
    const double theta = kTwoPi * (stratum + rng.uniform()) / kStrata;
    const double r = (2.0 * rng.uniform() - 1.0) * kHalfWidth;
    const double origin = a_inf(-r, theta);

    std::size_t usable = 0;
    ModelSequence seq;
    if (k_max >= 1) {
      seq = rect_points(r, theta, k_max);
      usable = static_cast<std::size_t>(k_max);
      for (std::size_t l = 0; l < usable; ++l) {
        if (seq.points[l].near_boundary) usable = l;
      }
    }
    for (int k = 0; k <= k_max; ++k) {
      if (k > 0 && static_cast<std::size_t>(k) > usable) break;
      const double other = k == 0 ? origin : a_inf(seq.points[k - 1].rho, theta);
      const double v = origin * other;
      const std::size_t cell = static_cast<std::size_t>(k) * kStrata + stratum;
      sums.count[cell] += 1.0;
      sums.sum[cell] += v;
      sums.sumsq[cell] += v * v;
    }
  }
  return sums;
}

CorrelationEstimate finish(const StratumSums& sums, int k) {
  double weight_total = 0.0;
  for (int h = 0; h < kStrata; ++h) {
    if (sums.count[static_cast<std::size_t>(k) * kStrata + h] > 0) weight_total += 1.0;
  }
  CorrelationEstimate est;
  if (weight_total == 0.0) return est;
  double mean = 0.0;
  double var = 0.0;
  double n = 0.0;
  for (int h = 0; h < kStrata; ++h) {
    const std::size_t cell = static_cast<std::size_t>(k) * kStrata + h;
    const double nh = sums.count[cell];
    if (nh == 0) continue;
    const double w = 1.0 / weight_total;
    const double mh = sums.sum[cell] / nh;
    mean += w * mh;
    if (nh > 1) {
      const double sh2 = std::max(0.0, (sums.sumsq[cell] - nh * mh * mh) / (nh - 1));
      var += w * w * sh2 / nh;
    }
    n += nh;
  }
  est.value = mean - 0.25;
  est.std_error = std::sqrt(var);
  est.n = static_cast<std::int64_t>(n);
  return est;
}

}  // namespace

bool ModelSequence::flagged_within(std::size_t k) const {
  const auto n = std::min(k, points.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].near_boundary) return true;
  }
  return false;
}

ModelSequence strip_points(double r, double theta, double t_max) {
  check_params(r, theta, "strip_points");
  if (!(t_max >= 0) || t_max > kMaxModelExtent) {
    throw ResourceLimitError("strip_points: t_max must lie in [0, 1e9]");
  }
  ModelSequence seq;
  seq.r = r;
  seq.theta = theta;
  seq.truncation_t = t_max;
  if (t_max > 0) scan_window(r, theta, 0.0, t_max, seq.points);
  return seq;
}

ModelSequence rect_points(double r, double theta, int k) {
  check_params(r, theta, "rect_points");
  check_k(k, "rect_points");
  ModelSequence seq;
  seq.r = r;
  seq.theta = theta;
  double t0 = 0.0;
  double t1 = std::max(4.0, 2.0 * k / std::numbers::sqrt2);
  for (;;) {
    scan_window(r, theta, t0, t1, seq.points);
    seq.truncation_t = t1;
    if (seq.points.size() >= static_cast<std::size_t>(k)) return seq;
    if (t1 >= kMaxModelExtent) {
      throw ResourceLimitError("rect_points: fewer than k points with t <= 1e9");
    }
    t0 = t1;
    t1 = std::min(2.0 * t1, kMaxModelExtent);
  }
}

double rho_k(double r, double theta, int k) {
  return rect_points(r, theta, k).points[static_cast<std::size_t>(k) - 1].rho;
}

double a_inf_k(double r, double theta, int k) {
  if (k == 0) return a_inf(r, theta);
  return a_inf(rho_k(r, theta, k), theta);
}

std::vector<CorrelationEstimate> model_ck_range(int k_max, std::int64_t n_samples,
                                                std::uint64_t seed, ModelCkOptions options) {
  if (k_max < 0) throw std::domain_error("model_ck: k must be >= 0");
  if (k_max > kMaxModelIndex) throw ResourceLimitError("model_ck: k above the limit 1e6");
  if (n_samples < 10000) throw std::domain_error("model_ck: n_samples must be >= 1e4");
  if (n_samples > kMaxSamples) throw ResourceLimitError("model_ck: n_samples above 4e9");

  const auto n_blocks = static_cast<std::size_t>((n_samples + kBlockSize - 1) / kBlockSize);
  const unsigned threads = detail::resolve_threads(options.threads);
  const std::size_t wave = std::max<std::size_t>(1, 2 * threads);

  // Blocks enter a binary-counter stack in index order, so the reduction
  // tree depends only on the number of blocks.
  struct Node {
    int level;
    StratumSums sums;
  };
  std::vector<Node> stack;
  for (std::size_t start = 0; start < n_blocks; start += wave) {
    const std::size_t count = std::min(wave, n_blocks - start);
    std::vector<StratumSums> results(count, StratumSums(0));
    detail::parallel_for(count, threads, [&](std::size_t i) {
      const auto b = static_cast<std::int64_t>(start + i);
      results[i] = run_block(k_max, b * kBlockSize, std::min(n_samples, (b + 1) * kBlockSize),
                             seed, static_cast<std::uint64_t>(b));
    });
    for (auto& res : results) {
      stack.push_back({0, std::move(res)});
      while (stack.size() >= 2 && stack[stack.size() - 1].level == stack[stack.size() - 2].level) {
        Node right = std::move(stack.back());
        stack.pop_back();
        stack.back().sums.merge(right.sums);
        ++stack.back().level;
      }
    }
  }
  while (stack.size() >= 2) {
    Node right = std::move(stack.back());
    stack.pop_back();
    stack.back().sums.merge(right.sums);
  }

  std::vector<CorrelationEstimate> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) out.push_back(finish(stack.front().sums, k));
  return out;
}

CorrelationEstimate model_ck(int k, std::int64_t n_samples, std::uint64_t seed,
                             ModelCkOptions options) {
  return model_ck_range(k, n_samples, seed, options).back();
}

PolarCoordinates model_frame(const AnnulusPoint& point) {
  return {point.r, point.theta + std::numbers::pi / 2};
}

RectDiagnostic rect_approx_diagnostic(const GammaList& gamma, int k, double cprime) {
  check_k(k, "rect_approx_diagnostic");
  if (!(cprime > 0) || !std::isfinite(cprime)) {
    throw std::domain_error("rect_approx_diagnostic: Cprime must be positive");
  }
  const std::size_t n = gamma.size();
  if (n < static_cast<std::size_t>(k) + 1) {
    throw std::domain_error("rect_approx_diagnostic: needs more than k lattice points");
  }
  const double length = cprime * k;
  const double radius = gamma.radius();

  std::vector<double> area(n);
  for (std::size_t j = 0; j < n; ++j) area[j] = area_disc_square(gamma[j].point, radius);

  RectDiagnostic diag;
  diag.kprime.min = static_cast<std::size_t>(-1);
  std::size_t set_mismatch = 0;
  std::size_t order_mismatch = 0;
  double kprime_total = 0.0;
  std::vector<LatticePoint> rect_set;
  std::vector<LatticePoint> run_set;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& lambda = gamma[j];
    const auto frame = model_frame(lambda);
    const auto seq = strip_points(std::clamp(frame.r, -kHalfWidth, kHalfWidth), frame.theta, length);
    const std::size_t kprime = seq.points.size();
    diag.kprime.min = std::min(diag.kprime.min, kprime);
    diag.kprime.max = std::max(diag.kprime.max, kprime);
    kprime_total += static_cast<double>(kprime);
    if (kprime < static_cast<std::size_t>(k)) ++diag.kprime.below_k;

    // The run lambda_j .. lambda_{j+k'} against lambda_j + {0, kappa_1..kappa_k'}.
    bool same_order = kprime + 1 <= n;
    rect_set.assign(1, lambda.point);
    run_set.assign(1, lambda.point);
    for (std::size_t i = 1; i <= kprime; ++i) {
      const auto& kappa = seq.points[i - 1].kappa;
      const LatticePoint mu{lambda.point.x + kappa.x, lambda.point.y + kappa.y};
      const auto& succ = gamma[(j + i) % n].point;
      rect_set.push_back(mu);
      run_set.push_back(succ);
      same_order = same_order && mu == succ;
    }
    std::sort(rect_set.begin(), rect_set.end());
    std::sort(run_set.begin(), run_set.end());
    if (kprime + 1 > n || rect_set != run_set) {
      ++set_mismatch;
      continue;
    }
    if (!same_order) {
      ++order_mismatch;
      continue;
    }
    ++diag.matched;
    const std::size_t upto = std::min<std::size_t>(static_cast<std::size_t>(k), kprime);
    for (std::size_t i = 1; i <= upto; ++i) {
      const double predicted = 1.0 - a_inf(seq.points[i - 1].rho, frame.theta);
      diag.max_area_gap = std::max(diag.max_area_gap, std::fabs(area[(j + i) % n] - predicted));
    }
  }
  diag.frac_set_mismatch = static_cast<double>(set_mismatch) / static_cast<double>(n);
  const std::size_t set_matched = n - set_mismatch;
  diag.frac_order_mismatch =
      set_matched == 0 ? 0.0 : static_cast<double>(order_mismatch) / static_cast<double>(set_matched);
  diag.kprime.mean = kprime_total / static_cast<double>(n);
  return diag;
}

}  // namespace annulus
