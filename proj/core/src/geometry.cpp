#include "annulus/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace annulus {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadialSlack = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double shoelace(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * twice;
}

// phi - sin(phi) without cancellation for small phi.
double phi_minus_sin(double phi) {
  if (phi < 1e-2) {
    const double p2 = phi * phi;
    return phi * p2 / 6.0 * (1.0 - p2 / 20.0 * (1.0 - p2 / 42.0 * (1.0 - p2 / 72.0)));
  }
  return phi - std::sin(phi);
}

// Part of one square edge that lies inside the disc, as parameters in [0, 1].
struct EdgeSpan {
  int edge = 0;
  double s_in = 0.0;
  double s_out = 0.0;
  Vec2 p_in;
  Vec2 p_out;
};

void check_radial(double r, const char* who) {
  if (!(std::fabs(r) <= kHalfWidth + kRadialSlack)) {
    throw std::domain_error(std::string(who) + ": r must lie in [-1/sqrt2, 1/sqrt2], got " +
                            std::to_string(r));
  }
}

// theta reduced into [0, pi/4] using the square's quarter-turn symmetry and
// the reflection theta -> pi/2 - theta.
double reduce_tilt(double theta) {
  double t = std::fmod(theta, kPi / 2);
  if (t < 0) t += kPi / 2;
  if (t > kPi / 4) t = kPi / 2 - t;
  return t;
}

struct Breakpoints {
  double s;  // sin(t + pi/4) / sqrt2
  double c;  // cos(t + pi/4) / sqrt2
};

Breakpoints breakpoints(double t) {
  return {std::sin(t + kPi / 4) * kHalfWidth, std::cos(t + kPi / 4) * kHalfWidth};
}

double a_inf_reduced(double r, double t) {
  const auto [s, c] = breakpoints(t);
  if (r < -s) return 1.0;
  if (r < -c) {
    const double u = r + s;
    return 1.0 - u * u / std::sin(2 * t);
  }
  if (r < c) return std::tan(t) / 2 - (r - c) / std::cos(t);
  if (r < s) {
    const double u = s - r;
    return u * u / std::sin(2 * t);
  }
  return 0.0;
}

// Integral of g(a_inf(r, t)) over r in [-1/sqrt2, 1/sqrt2], exact per branch.
template <class G>
double integrate_over_r(double t, const detail::GaussRule& rule, G&& g) {
  const auto [s, c] = breakpoints(t);
  const std::array<double, 6> cuts{-kHalfWidth, -s, -c, c, s, kHalfWidth};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::clamp(cuts[i], -kHalfWidth, kHalfWidth);
    const double hi = std::clamp(cuts[i + 1], -kHalfWidth, kHalfWidth);
    if (!(hi > lo)) continue;
    total += detail::integrate(rule, lo, hi, [&](double r) { return g(a_inf_reduced(r, t)); });
  }
  return total;
}

}  // namespace

double area_disc_square(LatticePoint point, double radius) {
  if (!(radius > 0)) return 0.0;
  const long double r2_hi = static_cast<long double>(radius) * radius;
  const long double r2_lo = std::fmal(radius, radius, -r2_hi);

  // Corners counter-clockwise, in units of 1/2 relative to the centre.
  constexpr std::array<std::array<int, 2>, 4> corner{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  constexpr std::array<std::array<int, 2>, 4> dir{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

  // q = |corner|^2 - R^2 with |corner|^2 a quarter-integer held exactly.
  auto excess = [&](int i) {
    const std::int64_t gx = 2 * point.x + corner[i][0];
    const std::int64_t gy = 2 * point.y + corner[i][1];
    const long double m = static_cast<long double>(gx * gx + gy * gy) / 4.0L;
    return (m - r2_hi) - r2_lo;
  };

  std::array<long double, 4> q{};
  bool all_inside = true;
  for (int i = 0; i < 4; ++i) {
    q[i] = excess(i);
    all_inside = all_inside && q[i] <= 0;
  }
  if (all_inside) return 1.0;

  std::vector<EdgeSpan> spans;
  for (int i = 0; i < 4; ++i) {
    // |G0 + s d|^2 - R^2 = s^2 + 2 b s + q, with G0 the global corner.
    const long double gx = point.x + corner[i][0] * 0.5L;
    const long double gy = point.y + corner[i][1] * 0.5L;
    const long double b = gx * dir[i][0] + gy * dir[i][1];
    const long double disc = b * b - q[i];
    if (disc < 0) continue;
    const long double root = std::sqrt(disc);
    long double s1;
    long double s2;
    if (b > 0) {
      s1 = -(b + root);
      s2 = s1 != 0 ? q[i] / s1 : 0.0L;
    } else {
      s2 = -b + root;
      s1 = s2 != 0 ? q[i] / s2 : 0.0L;
    }
    if (s1 > s2) std::swap(s1, s2);
    const double lo = static_cast<double>(std::max<long double>(0.0L, s1));
    const double hi = static_cast<double>(std::min<long double>(1.0L, s2));
    if (!(hi > lo)) continue;
    const Vec2 start{corner[i][0] * 0.5, corner[i][1] * 0.5};
    EdgeSpan span;
    span.edge = i;
    span.s_in = lo;
    span.s_out = hi;
    span.p_in = {start.x + lo * dir[i][0], start.y + lo * dir[i][1]};
    span.p_out = {start.x + hi * dir[i][0], start.y + hi * dir[i][1]};
    spans.push_back(span);
  }

  const Vec2 centre{-static_cast<double>(point.x), -static_cast<double>(point.y)};
  if (spans.empty()) {
    // No edge meets the disc: either the disc sits inside the square or the
    // two are disjoint.
    const bool centre_inside = std::fabs(centre.x) <= 0.5 && std::fabs(centre.y) <= 0.5;
    return centre_inside ? kPi * radius * radius : 0.0;
  }

  std::vector<Vec2> polygon;
  double segments = 0.0;
  auto same = [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; };
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& cur = spans[i];
    const auto& next = spans[(i + 1) % spans.size()];
    if (polygon.empty() || !same(polygon.back(), cur.p_in)) polygon.push_back(cur.p_in);
    polygon.push_back(cur.p_out);
    const bool joined = spans.size() > 1 && cur.s_out >= 1.0 && next.s_in <= 0.0 &&
                        next.edge == (cur.edge + 1) % 4;
    if (joined) continue;  // next span starts at the shared corner
    // Arc from cur.p_out counter-clockwise to next.p_in.
    const Vec2 chord = next.p_in - cur.p_out;
    const double len = std::hypot(chord.x, chord.y);
    const double half = std::asin(std::min(1.0, len / (2.0 * radius)));
    const bool minor = len == 0.0 || cross(cur.p_out - centre, chord) > 0;
    const double phi = minor ? 2.0 * half : 2.0 * kPi - 2.0 * half;
    segments += 0.5 * radius * radius * phi_minus_sin(phi);
  }
  if (polygon.size() > 1 && same(polygon.front(), polygon.back())) polygon.pop_back();
  const double area = shoelace(polygon) + segments;
  return std::clamp(area, 0.0, 1.0);
}

double a_inf(double r, double theta) {
  check_radial(r, "a_inf");
  return a_inf_reduced(r, reduce_tilt(theta));
}

double a_inf_oracle(double r, double theta) {
  check_radial(r, "a_inf_oracle");
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  constexpr std::array<std::array<double, 2>, 4> unit{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}};
  std::array<Vec2, 4> square;
  for (int i = 0; i < 4; ++i) {
    square[i] = {r + ct * unit[i][0] - st * unit[i][1], st * unit[i][0] + ct * unit[i][1]};
  }
  // Sutherland-Hodgman against the single half-plane x <= 0.
  std::vector<Vec2> clipped;
  for (int i = 0; i < 4; ++i) {
    const Vec2 p = square[i];
    const Vec2 q = square[(i + 1) % 4];
    const bool p_in = p.x <= 0;
    const bool q_in = q.x <= 0;
    if (p_in) clipped.push_back(p);
    if (p_in != q_in) {
      const double s = p.x / (p.x - q.x);
      clipped.push_back({0.0, p.y + s * (q.y - p.y)});
    }
  }
  if (clipped.size() < 3) return 0.0;
  return std::fabs(shoelace(clipped));
}

double cond_expectation(double theta, int n_quad) {
  if (n_quad < 16) throw std::domain_error("cond_expectation: n_quad must be >= 16");
  const auto rule = detail::gauss_legendre(n_quad);
  return integrate_over_r(reduce_tilt(theta), rule, [](double a) { return a; }) / std::sqrt(2.0);
}

double c0_constant() {
  const double sqrt2 = std::sqrt(2.0);
  const double bracket = 4.0 / 15.0 + 2.0 * std::log(1.0 + sqrt2) / 3.0 + 2.0 * sqrt2 / 15.0;
  return 0.25 - bracket / (2.0 * kPi * sqrt2);
}

double a_inf_second_moment(int n_theta) {
  const auto outer = detail::gauss_legendre(n_theta);
  const auto inner = detail::gauss_legendre(8);
  const double integral = detail::integrate(outer, 0.0, kPi / 4, [&](double t) {
    return integrate_over_r(t, inner, [](double a) { return a * a; }) / std::sqrt(2.0);
  });
  return integral / (kPi / 4);
}

double a_r_vs_a_inf_gap(const GammaList& gamma) {
  if (gamma.empty()) throw std::domain_error("a_r_vs_a_inf_gap: empty annulus");
  double gap = 0.0;
  for (const auto& p : gamma.points()) {
    gap = std::max(gap, std::fabs(area_disc_square(p.point, gamma.radius()) - a_inf(p.r, p.theta)));
  }
  return gap;
}

}  // namespace annulus
