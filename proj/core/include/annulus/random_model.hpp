#pragma once

#include <cstdint>
#include <vector>

#include "annulus/estimate.hpp"
#include "annulus/lattice.hpp"

namespace annulus {

/// Largest k accepted by rect_points() and friends.
inline constexpr int kMaxModelIndex = 1000000;
/// rect_points() gives up (ResourceLimitError) beyond this long-side extent.
inline constexpr double kMaxModelExtent = 1e9;
/// |rho| within this distance of 1/sqrt2 marks a point as near the boundary.
inline constexpr double kBoundaryFlag = 1e-12;

/// Lattice point kappa of the tilted strip with coordinates
/// t = kappa . (cos theta, sin theta) and
/// rho = kappa . (-sin theta, cos theta) - r.
struct ModelPoint {
  LatticePoint kappa;
  double t = 0.0;
  double rho = 0.0;
  bool near_boundary = false;
};

/// Strip points with 0 < t <= truncation_t, sorted by t (ties: rho, then
/// kappa). Complete up to truncation_t.
struct ModelSequence {
  double r = 0.0;
  double theta = 0.0;
  std::vector<ModelPoint> points;
  double truncation_t = 0.0;

  /// True when one of the first k points is flagged near the boundary.
  bool flagged_within(std::size_t k) const;
};

/// Every strip point with 0 < t <= t_max. (r, theta) must lie in G.
ModelSequence strip_points(double r, double theta, double t_max);

/// At least the first k strip points; windows of long-side length
/// max(4, 2k/sqrt2) are scanned and doubled until k points are found.
/// Requires 1 <= k <= kMaxModelIndex and |r| <= 1/sqrt2.
ModelSequence rect_points(double r, double theta, int k);

/// rho of the k-th strip point.
double rho_k(double r, double theta, int k);

/// a_inf(rho_k, theta) for k >= 1; a_inf(r, theta) for k = 0.
double a_inf_k(double r, double theta, int k);

struct ModelCkOptions {
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 0;
};

/// Monte Carlo covariance between the area of the strip's origin square and
/// the area of its k-th point, E[a_inf(rho_0, theta) a_inf(rho_k, theta)] - 1/4
/// with rho_0 = -r the origin's short-side coordinate, over (r, theta) uniform
/// in G. theta is stratified into 256 equal strata; std_error is the
/// stratified standard error. Samples with a flagged point among the first k
/// are dropped (n reports the samples kept). k = 0 gives the variance of
/// a_inf. Requires n_samples >= 1e4.
CorrelationEstimate model_ck(int k, std::int64_t n_samples, std::uint64_t seed,
                             ModelCkOptions options = {});

/// model_ck(k) for k = 0..k_max from one shared set of samples;
/// element k of the result equals model_ck(k, ...) bit for bit.
std::vector<CorrelationEstimate> model_ck_range(int k_max, std::int64_t n_samples,
                                                std::uint64_t seed,
                                                ModelCkOptions options = {});

/// Strip parameters whose points reproduce the neighbours of `point`:
/// (r, theta + pi/2). The k-th strip point is the k-th successor of `point`
/// translated to the origin, and its rho approximates minus the successor's r.
PolarCoordinates model_frame(const AnnulusPoint& point);

struct KPrimeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  /// Number of j with k' < k.
  std::size_t below_k = 0;
};

struct RectDiagnostic {
  /// Fraction of j whose rectangle holds a different set of lattice points
  /// than the angular run lambda_j .. lambda_{j+k'}.
  double frac_set_mismatch = 0.0;
  /// Among j with matching sets, fraction whose long-side order differs from
  /// the angular order.
  double frac_order_mismatch = 0.0;
  /// max over fully matched j and 1 <= k'' <= min(k, k') of
  /// |A_R(lambda_{j+k''}) - (1 - a_inf_k(model_frame(lambda_j), k''))|.
  double max_area_gap = 0.0;
  KPrimeStats kprime;
  std::size_t matched = 0;
};

/// Rectangle of length cprime * k along the tangent at R e^{i theta_j} and
/// width sqrt2 across it, compared against the angular neighbours of every
/// lambda_j. Requires k >= 1, cprime > 0 and at least k + 1 points.
RectDiagnostic rect_approx_diagnostic(const GammaList& gamma, int k, double cprime);

}  // namespace annulus
