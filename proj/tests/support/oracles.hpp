#pragma once

// Slow reference implementations used only by the tests. None of them share
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

struct Point {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const Point&) const = default;
};

/// Double loop over the bounding box; membership in long double.
inline std::vector<Point> brute_gamma(double radius) {
  const long double s = std::sqrt(0.5L);
  const long double lo = (radius - s) * (radius - s);
  const long double hi = (radius + s) * (radius + s);
  const auto n = static_cast<std::int64_t>(std::ceil(radius + 1));
  std::vector<Point> out;
  for (std::int64_t x = -n; x <= n; ++x) {
    for (std::int64_t y = -n; y <= n; ++y) {
      const long double q = static_cast<long double>(x * x + y * y);
      if (lo < q && q < hi) out.push_back({x, y});
    }
  }
  auto angle = [](const Point& p) {
    double a = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
    return a < 0 ? a + 2 * kPi : a;
  };
  std::sort(out.begin(), out.end(), [&](const Point& a, const Point& b) {
    const double ta = angle(a);
    const double tb = angle(b);
    if (ta != tb) return ta < tb;
    return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y;
  });
  return out;
}

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        const double diff = left + right - whole;
        if (d <= 0 || std::fabs(diff) <= 15 * eps) return left + right + diff / 15;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

/// Area of the unit square centred at (x0, y0) inside the disc of radius R,
/// as an integral over horizontal chords. Breakpoints split the kinks.
inline double square_disc_area(double x0, double y0, double radius) {
  auto chord = [&](double y) {
    if (std::fabs(y) >= radius) return 0.0;
    const double h = std::sqrt(radius * radius - y * y);
    const double lo = std::max(x0 - 0.5, -h);
    const double hi = std::min(x0 + 0.5, h);
    return std::max(0.0, hi - lo);
  };
  std::vector<double> cuts = {y0 - 0.5, y0 + 0.5};
  for (double c : {-radius, radius}) {
    if (c > y0 - 0.5 && c < y0 + 0.5) cuts.push_back(c);
  }
  // Heights where the circle crosses the vertical sides.
  for (double xs : {x0 - 0.5, x0 + 0.5}) {
    if (std::fabs(xs) < radius) {
      const double yc = std::sqrt(radius * radius - xs * xs);
      for (double c : {-yc, yc}) {
        if (c > y0 - 0.5 && c < y0 + 0.5) cuts.push_back(c);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += simpson(chord, cuts[i], cuts[i + 1], 1e-14);
  }
  return total;
}

/// Radical inverse in base b.
inline double halton(std::uint64_t i, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

struct StripPoint {
  std::int64_t a;
  std::int64_t b;
  double t;
  double rho;
};

/// Strip points with 0 < t <= t_max by scanning the full box |a|,|b| <= t_max + 2.
inline std::vector<StripPoint> brute_strip(double r, double theta, double t_max) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double w = std::sqrt(0.5);
  const auto n = static_cast<std::int64_t>(std::ceil(t_max + 2));
  std::vector<StripPoint> out;
  for (std::int64_t a = -n; a <= n; ++a) {
    for (std::int64_t b = -n; b <= n; ++b) {
      const double t = a * c + b * s;
      const double rho = -a * s + b * c - r;
      if (t > 0 && t <= t_max && std::fabs(rho) <= w) out.push_back({a, b, t, rho});
    }
  }
  std::sort(out.begin(), out.end(), [](const StripPoint& p, const StripPoint& q) {
    if (p.t != q.t) return p.t < q.t;
    if (p.rho != q.rho) return p.rho < q.rho;
    if (p.a != q.a) return p.a < q.a;
    return p.b < q.b;
  });
  return out;
}

}  // namespace oracle
