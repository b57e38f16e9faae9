#pragma once

// Mean-field steady state of the driven cavity / Kerr magnon / mechanics
// model, and the adiabatic elimination of the magnon that produces the
// reduced cavity-mechanics model.
//
// Steady-state equations (rotating frame of the drive):
//   0 = -(i D_a' + kappa_a/2) a - i J m - i eps,   D_a' = delta_a + g0 (b + b*)
//   0 = -(i (delta_m - K |m|^2) + kappa_m/2) m - i J a
//   0 = -(i omega_b + gamma_b/2) b - i g0 |a|^2
//
// The mechanics equation gives b in terms of u = |a|^2 and the magnon
// equation gives u in terms of w = |m|^2, so every root is a zero of one real
// function of w on a bounded interval. All roots are bracketed on a dense
// grid, bisected, and then polished with Newton on the full complex system.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kerrcool/model.hpp"

namespace kerrcool {

struct SteadyState {
  complex a_s{0.0, 0.0};
  complex m_s{0.0, 0.0};
  complex b_s{0.0, 0.0};
  double residual = 0.0;  // Euclidean norm of the three complex residuals
};

struct AdiabaticMap {
  double delta_a_shift = 0.0;  // D_a = delta_a + g0 (b_s + b_s*)
  double delta_m_shift = 0.0;  // D_m = delta_m - 2 K |m_s|^2
  complex k_m{0.0, 0.0};       // K m_s^2
  double eta = 0.0;            // J^2 / (D_m^2 + kappa_m^2/4 - |K_m|^2)
};

struct SteadySolverOptions {
  int scan_points = 4096;
  int bisection_iterations = 200;
  int newton_iterations = 40;
};

/// Residuals of the three steady-state equations at (a, m, b).
inline std::array<complex, 3> steady_residuals(const FullSystemParams& p, complex a,
                                               complex m, complex b) {
  constexpr complex i{0.0, 1.0};
  const double delta_a_eff = p.delta_a + 2.0 * p.g0 * b.real();
  const double delta_m_eff = p.delta_m - p.kerr * std::norm(m);
  return {
      -(i * delta_a_eff + p.kappa_a / 2.0) * a - i * p.j_coupling * m - i * p.drive_amp,
      -(i * delta_m_eff + p.kappa_m / 2.0) * m - i * p.j_coupling * a,
      -(i * p.omega_b + p.gamma_b / 2.0) * b - i * p.g0 * std::norm(a),
  };
}

inline double steady_residual_norm(const FullSystemParams& p, complex a, complex m,
                                   complex b) {
  const auto r = steady_residuals(p, a, m, b);
  return std::sqrt(std::norm(r[0]) + std::norm(r[1]) + std::norm(r[2]));
}

namespace detail {

// Mechanical amplitude slaved to the photon number u = |a|^2.
inline complex mech_amplitude(const FullSystemParams& p, double u) {
  constexpr complex i{0.0, 1.0};
  return -i * p.g0 * u / (i * p.omega_b + p.gamma_b / 2.0);
}

inline double shifted_cavity_detuning(const FullSystemParams& p, double u) {
  return p.delta_a + 2.0 * p.g0 * mech_amplitude(p, u).real();
}

// Everything about a candidate root that follows from w = |m|^2 (J != 0) or
// u = |a|^2 (J == 0).
struct Reduced {
  double u = 0.0;
  complex cavity_denominator;  // Z with (Z) a = -i eps
  complex magnon_denominator;  // i (delta_m - K w) + kappa_m / 2
};

inline Reduced reduce_on_magnon(const FullSystemParams& p, double w) {
  constexpr complex i{0.0, 1.0};
  Reduced r;
  const double detuning = p.delta_m - p.kerr * w;
  r.magnon_denominator = i * detuning + p.kappa_m / 2.0;
  r.u = w * std::norm(r.magnon_denominator) / (p.j_coupling * p.j_coupling);
  r.cavity_denominator = i * shifted_cavity_detuning(p, r.u) + p.kappa_a / 2.0 +
                         p.j_coupling * p.j_coupling / r.magnon_denominator;
  return r;
}

inline Reduced reduce_on_cavity(const FullSystemParams& p, double u) {
  constexpr complex i{0.0, 1.0};
  Reduced r;
  r.u = u;
  r.magnon_denominator = complex{p.kappa_m / 2.0, p.delta_m};
  r.cavity_denominator = i * shifted_cavity_detuning(p, u) + p.kappa_a / 2.0;
  return r;
}

inline SteadyState reconstruct(const FullSystemParams& p, const Reduced& r) {
  constexpr complex i{0.0, 1.0};
  SteadyState s;
  s.a_s = -i * p.drive_amp / r.cavity_denominator;
  s.m_s = p.j_coupling == 0.0 ? complex{} : -i * p.j_coupling * s.a_s / r.magnon_denominator;
  s.b_s = mech_amplitude(p, std::norm(s.a_s));
  return s;
}

// Newton on the 6 real unknowns with a central-difference Jacobian. The
// equations contain |a|^2, |m|^2 and Re b, so they are not holomorphic.
inline void newton_polish(const FullSystemParams& p, SteadyState& s, int iterations) {
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  using Mat6 = Eigen::Matrix<double, 6, 6>;
  auto pack = [](const SteadyState& st) {
    Vec6 x;
    x << st.a_s.real(), st.a_s.imag(), st.m_s.real(), st.m_s.imag(), st.b_s.real(),
        st.b_s.imag();
    return x;
  };
  auto residual = [&](const Vec6& x) {
    const auto r = steady_residuals(p, {x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]});
    Vec6 f;
    f << r[0].real(), r[0].imag(), r[1].real(), r[1].imag(), r[2].real(), r[2].imag();
    return f;
  };

  Vec6 x = pack(s);
  Vec6 f = residual(x);
  double best = f.norm();
  for (int it = 0; it < iterations && best > 0.0; ++it) {
    Mat6 jac;
    const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
    for (int j = 0; j < 6; ++j) {
      const double h = 1e-7 * std::max(std::abs(x[j]), scale * 1e-3);
      Vec6 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      jac.col(j) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const Vec6 step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) break;
    const Vec6 x_new = x + step;
    const Vec6 f_new = residual(x_new);
    if (!(f_new.norm() < best)) break;
    x = x_new;
    f = f_new;
    best = f.norm();
  }
  s.a_s = {x[0], x[1]};
  s.m_s = {x[2], x[3]};
  s.b_s = {x[4], x[5]};
  s.residual = best;
}

inline std::vector<double> scan_grid(double upper, int points) {
  std::vector<double> grid;
  grid.reserve(2 * static_cast<std::size_t>(points) + 1);
  grid.push_back(0.0);
  for (int k = 1; k <= points; ++k) grid.push_back(upper * k / points);
  const double lo = std::log(upper * 1e-16);
  const double hi = std::log(upper);
  for (int k = 0; k < points; ++k) grid.push_back(std::exp(lo + (hi - lo) * k / points));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace detail

/// Every steady state, sorted by |m_s|^2 (then |a_s|^2). Throws NumericalError
/// if a bracketed root cannot be polished to 1e-12 max(1, eps).
inline std::vector<SteadyState> solve_steady(const FullSystemParams& params,
                                             const SteadySolverOptions& opt = {}) {
  const FullSystemParams& p = validate(params);
  if (p.drive_amp == 0.0) return {SteadyState{}};

  const double eps2 = p.drive_amp * p.drive_amp;
  const double tol = 1e-12 * std::max(1.0, p.drive_amp);
  const bool magnon_coupled = p.j_coupling != 0.0;

  // Re of the cavity denominator is >= kappa_a/2, so u <= 4 eps^2 / kappa_a^2,
  // and the magnon equation gives w <= 4 J^2 u / kappa_m^2.
  const double u_max = 4.0 * eps2 / (p.kappa_a * p.kappa_a);
  const double upper =
      (magnon_coupled ? 4.0 * p.j_coupling * p.j_coupling * u_max / (p.kappa_m * p.kappa_m)
                      : u_max) *
      (1.0 + 1e-9);

  auto reduce = [&](double v) {
    return magnon_coupled ? detail::reduce_on_magnon(p, v) : detail::reduce_on_cavity(p, v);
  };
  // Zero exactly at a root; negative at v = 0.
  auto balance = [&](double v) {
    const auto r = reduce(v);
    return r.u * std::norm(r.cavity_denominator) / eps2 - 1.0;
  };

  const auto grid = detail::scan_grid(upper, opt.scan_points);
  std::vector<double> roots;
  double prev_v = grid.front();
  double prev_f = balance(prev_v);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double v = grid[k];
    const double f = balance(v);
    if (f == 0.0) {
      roots.push_back(v);
    } else if ((prev_f < 0.0) != (f < 0.0) && prev_f != 0.0) {
      double lo = prev_v, hi = v, flo = prev_f;
      for (int it = 0; it < opt.bisection_iterations && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = balance(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_v = v;
    prev_f = f;
  }

  std::vector<SteadyState> states;
  double worst = 0.0;
  for (double v : roots) {
    SteadyState s = detail::reconstruct(p, reduce(v));
    s.residual = steady_residual_norm(p, s.a_s, s.m_s, s.b_s);
    if (s.residual > 0.0) detail::newton_polish(p, s, opt.newton_iterations);
    worst = std::max(worst, s.residual);
    states.push_back(s);
  }
  if (states.empty() || worst > tol) {
    std::ostringstream msg;
    msg << "steady-state solve did not converge: ";
    if (states.empty())
      msg << "no root bracketed";
    else
      msg << "best residual " << worst << " > " << tol;
    throw NumericalError(msg.str());
  }
  std::sort(states.begin(), states.end(), [](const SteadyState& x, const SteadyState& y) {
    const double wx = std::norm(x.m_s), wy = std::norm(y.m_s);
    if (wx != wy) return wx < wy;
    return std::norm(x.a_s) < std::norm(y.a_s);
  });
  return states;
}

/// Linearizes around `root` and eliminates the magnon. The cavity frame is
/// rotated by arg(g0 a_s) so that G = |g0 a_s| is real; xi rotates with it.
inline std::pair<AdiabaticMap, EffectiveParams> eliminate(const FullSystemParams& params,
                                                          const SteadyState& root) {
  const FullSystemParams& p = validate(params);
  AdiabaticMap map;
  map.delta_a_shift = p.delta_a + 2.0 * p.g0 * root.b_s.real();
  map.delta_m_shift = p.delta_m - 2.0 * p.kerr * std::norm(root.m_s);
  map.k_m = p.kerr * root.m_s * root.m_s;
  const double denom = map.delta_m_shift * map.delta_m_shift +
                       p.kappa_m * p.kappa_m / 4.0 - std::norm(map.k_m);
  if (!(denom > 0.0)) throw InfeasibleError("adiabatic elimination invalid at this root");
  map.eta = p.j_coupling * p.j_coupling / denom;

  const complex coupling = p.g0 * root.a_s;
  const double theta = std::abs(coupling) > 0.0 ? std::arg(coupling) : 0.0;

  EffectiveParams eff;
  eff.delta = map.delta_a_shift - map.eta * map.delta_m_shift;
  eff.kappa = p.kappa_a + map.eta * p.kappa_m;
  eff.g_lin = std::abs(coupling);
  eff.xi = -map.eta * map.k_m / 2.0 * std::polar(1.0, -2.0 * theta);
  eff.omega_b = p.omega_b;
  eff.gamma_b = p.gamma_b;
  eff.n_th = p.n_th;
  return {map, eff};
}

}  // namespace kerrcool
