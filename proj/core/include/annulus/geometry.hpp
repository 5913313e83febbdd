#pragma once

#include "annulus/lattice.hpp"

namespace annulus {

/// Area of the unit square centred at `point` that lies inside the closed
/// disc of radius R about the origin.
///
/// The square boundary is walked counter-clockwise; the pieces inside the
/// disc form a polygon whose missing parts are circular arcs. The result is
/// the shoelace area of that polygon (in coordinates local to the square)
/// plus one circular segment per arc. Every quantity stays O(1) in size, so
/// the result keeps ~1e-12 absolute accuracy even at R ~ 1e7.
double area_disc_square(LatticePoint point, double radius);

/// Area of the unit square tilted by theta and centred at (r, 0) that lies in
/// the half-plane x <= 0. Closed form, piecewise quadratic in r.
///
/// Requires |r| <= 1/sqrt2 (a 1e-12 overshoot is tolerated for points that
/// sit on the strip boundary); throws std::domain_error otherwise. Any real
/// theta is accepted.
double a_inf(double r, double theta);

/// Independent evaluation of a_inf(): clips the tilted square against
/// x <= 0 and returns the shoelace area. Same domain as a_inf().
double a_inf_oracle(double r, double theta);

/// (1/sqrt2) * integral of a_inf(r, theta) over r in [-1/sqrt2, 1/sqrt2],
/// integrated exactly per branch with n_quad-point Gauss-Legendre rules.
/// Requires n_quad >= 16.
double cond_expectation(double theta, int n_quad = 16);

/// Limiting variance of the boundary areas:
/// 1/4 - (4/15 + 2 log(1 + sqrt2)/3 + 2 sqrt2/15) / (2 pi sqrt2).
double c0_constant();

/// Second moment E[a_inf^2] over (r, theta) uniform, by Gauss-Legendre
/// quadrature over theta in [0, pi/4] (exact piecewise rule in r).
double a_inf_second_moment(int n_theta = 256);

/// max over the annulus of |A_R(lambda) - a_inf(r_lambda, theta_lambda)|.
/// Requires a nonempty list.
double a_r_vs_a_inf_gap(const GammaList& gamma);

}  // namespace annulus
