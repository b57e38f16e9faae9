#pragma once

// Nelder-Mead downhill simplex for small unconstrained problems. Infeasible
// points may be reported as +inf; they are simply never accepted.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace kerrcool {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

struct SimplexOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-10;  // relative spread of the vertex values
  double x_tolerance = 1e-12;  // simplex diameter relative to `scale`
  double scale = 1.0;
};

template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, std::array<double, N> start,
                             const std::array<double, N>& step,
                             const SimplexOptions& opt = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> pts;
  std::array<double, N + 1> val;
  SimplexResult<N> res;

  auto eval = [&](const Point& p) {
    ++res.evaluations;
    return f(p);
  };
  pts[0] = start;
  for (std::size_t k = 0; k < N; ++k) {
    pts[k + 1] = start;
    pts[k + 1][k] += step[k];
  }
  for (std::size_t k = 0; k <= N; ++k) val[k] = eval(pts[k]);

  auto combine = [](const Point& a, const Point& b, double t) {
    Point r;
    for (std::size_t k = 0; k < N; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  for (; res.iterations < opt.max_iterations; ++res.iterations) {
    std::array<std::size_t, N + 1> order;
    for (std::size_t k = 0; k <= N; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return val[i] < val[j]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[N - 1];

    double diameter = 0.0;
    for (std::size_t k = 0; k <= N; ++k)
      for (std::size_t d = 0; d < N; ++d)
        diameter = std::max(diameter, std::abs(pts[k][d] - pts[best][d]));
    const double spread = std::abs(val[worst] - val[best]);
    if (std::isfinite(val[worst]) &&
        spread <= opt.f_tolerance * std::max(std::abs(val[best]), 1e-300) &&
        diameter <= std::max(opt.x_tolerance * opt.scale, 1e-300)) {
      res.converged = true;
      break;
    }
    if (diameter <= 1e-15 * opt.scale) {
      res.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t k = 0; k <= N; ++k) {
      if (k == worst) continue;
      for (std::size_t d = 0; d < N; ++d) centroid[d] += pts[k][d] / N;
    }

    const Point reflected = combine(centroid, pts[worst], -1.0);
    const double f_r = eval(reflected);
    if (f_r < val[best]) {
      const Point expanded = combine(centroid, pts[worst], -2.0);
      const double f_e = eval(expanded);
      if (f_e < f_r) {
        pts[worst] = expanded;
        val[worst] = f_e;
      } else {
        pts[worst] = reflected;
        val[worst] = f_r;
      }
      continue;
    }
    if (f_r < val[second]) {
      pts[worst] = reflected;
      val[worst] = f_r;
      continue;
    }
    const bool outside = f_r < val[worst];
    const Point contracted = combine(centroid, outside ? reflected : pts[worst], 0.5);
    const double f_c = eval(contracted);
    if (f_c < (outside ? f_r : val[worst])) {
      pts[worst] = contracted;
      val[worst] = f_c;
      continue;
    }
    for (std::size_t k = 0; k <= N; ++k) {
      if (k == best) continue;
      pts[k] = combine(pts[best], pts[k], 0.5);
      val[k] = eval(pts[k]);
    }
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(val.begin(), val.end()) - val.begin());
  res.x = pts[best];
  res.value = val[best];
  return res;
}

}  // namespace kerrcool
