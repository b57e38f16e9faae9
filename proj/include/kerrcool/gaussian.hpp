#pragma once

// Exact treatment of the linearized (Gaussian) cavity-mechanics model.
//
// Conventions: quadratures x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2),
// ordered (x_a, p_a, x_b, p_b); V is the symmetrized covariance, vacuum
// variance 1/2; dV/dt = A V + V A^T + D.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "kerrcool/model.hpp"

namespace kerrcool {

using Matrix4 = Eigen::Matrix4d;

/// Second-order input correlators of the cavity reservoir:
/// <a_in^dag a_in> = occupation, <a_in a_in> = correlation.
struct CavityBath {
  double occupation = 0.0;
  complex correlation{0.0, 0.0};

  static CavityBath thermal(double n_a) {
    detail::require_non_negative("n_a", n_a);
    return {n_a, {}};
  }
  static CavityBath squeezed(const SqueezedBathParams& bath) {
    return {validate(bath).n_s(), bath.m_s()};
  }
};

struct CovarianceState {
  Matrix4 v = Matrix4::Zero();
  Matrix4 drift = Matrix4::Zero();
  Matrix4 diffusion = Matrix4::Zero();
};

struct StabilityVerdict {
  bool stable = false;
  double margin = 0.0;               // smallest Hurwitz determinant
  std::array<double, 4> hurwitz{};   // Delta_1 .. Delta_4
};

inline Matrix4 drift_matrix(const EffectiveParams& params) {
  const EffectiveParams& e = validate(params);
  const double xr = e.xi.real(), xi = e.xi.imag();
  const double g = e.g_lin;
  Matrix4 a;
  // clang-format off
  a << -e.kappa / 2.0 + 2.0 * xi, e.delta - 2.0 * xr,        0.0,            0.0,
       -(e.delta + 2.0 * xr),     -e.kappa / 2.0 - 2.0 * xi, -2.0 * g,       0.0,
       0.0,                       0.0,                       -e.gamma_b / 2.0, e.omega_b,
       -2.0 * g,                  0.0,                       -e.omega_b,     -e.gamma_b / 2.0;
  // clang-format on
  return a;
}

inline Matrix4 diffusion_matrix(const EffectiveParams& params, const CavityBath& bath) {
  const EffectiveParams& e = validate(params);
  const double n = bath.occupation;
  const complex m = bath.correlation;
  Matrix4 d = Matrix4::Zero();
  d(0, 0) = e.kappa * (0.5 + n + m.real());
  d(1, 1) = e.kappa * (0.5 + n - m.real());
  d(0, 1) = d(1, 0) = e.kappa * m.imag();
  d(2, 2) = d(3, 3) = e.gamma_b * (e.n_th + 0.5);
  return d;
}

/// Squeezed bath when given, otherwise a thermal cavity bath with occupation n_a.
inline Matrix4 diffusion_matrix(const EffectiveParams& e,
                                const std::optional<SqueezedBathParams>& bath,
                                double n_a = 0.0) {
  return diffusion_matrix(e, bath ? CavityBath::squeezed(*bath) : CavityBath::thermal(n_a));
}

/// Monic characteristic polynomial det(lambda I - A) = lambda^4 + c[1] lambda^3
/// + c[2] lambda^2 + c[3] lambda + c[4], from power traces (Newton's identities).
inline std::array<double, 5> characteristic_polynomial(const Matrix4& a) {
  const Matrix4 a2 = a * a;
  const Matrix4 a3 = a2 * a;
  const double p1 = a.trace(), p2 = a2.trace(), p3 = a3.trace();
  const double e1 = p1;
  const double e2 = (e1 * p1 - p2) / 2.0;
  const double e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
  const double e4 = a.determinant();
  return {1.0, -e1, e2, -e3, e4};
}

/// Routh-Hurwitz test on the quartic characteristic polynomial.
inline StabilityVerdict is_stable(const Matrix4& drift) {
  const auto c = characteristic_polynomial(drift);
  const double a1 = c[1], a2 = c[2], a3 = c[3], a4 = c[4];
  StabilityVerdict v;
  v.hurwitz[0] = a1;
  v.hurwitz[1] = a1 * a2 - a3;
  v.hurwitz[2] = a3 * v.hurwitz[1] - a1 * a1 * a4;
  v.hurwitz[3] = a4 * v.hurwitz[2];
  v.margin = *std::min_element(v.hurwitz.begin(), v.hurwitz.end());
  v.stable = v.margin > 0.0;
  return v;
}

/// Roots of a monic quartic by Aberth-Ehrlich iteration.
inline std::array<complex, 4> quartic_roots(const std::array<double, 5>& c) {
  auto eval = [&](complex z) {
    complex p = 1.0, dp = 0.0;
    for (int k = 1; k <= 4; ++k) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
    return std::pair{p, dp};
  };
  double radius = 0.0;
  for (int k = 1; k <= 4; ++k) radius = std::max(radius, std::abs(c[k]));
  radius = 1.0 + radius;  // Cauchy bound
  std::array<complex, 4> z;
  for (int k = 0; k < 4; ++k)
    z[k] = std::polar(0.5 * radius, 0.4 + k * std::numbers::pi / 2.0);

  for (int it = 0; it < 500; ++it) {
    double biggest = 0.0;
    for (int k = 0; k < 4; ++k) {
      const auto [p, dp] = eval(z[k]);
      if (p == complex{}) continue;
      const complex ratio = p / dp;
      complex repulsion = 0.0;
      for (int j = 0; j < 4; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      biggest = std::max(biggest, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (biggest < 1e-15) break;
  }
  return z;
}

/// max Re(lambda) over the eigenvalues of A, via the characteristic quartic.
inline double spectral_abscissa(const Matrix4& a) {
  const auto roots = quartic_roots(characteristic_polynomial(a));
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots) s = std::max(s, r.real());
  return s;
}

inline Matrix4 lyapunov_residual(const Matrix4& a, const Matrix4& v, const Matrix4& d) {
  return a * v + v * a.transpose() + d;
}

/// Unique V with A V + V A^T + D = 0. Throws InfeasibleError if A is unstable.
inline CovarianceState lyapunov_steady(const Matrix4& drift, const Matrix4& diffusion) {
  if (!is_stable(drift).stable)
    throw InfeasibleError("no steady state: drift matrix is unstable");

  using Mat16 = Eigen::Matrix<double, 16, 16>;
  using Vec16 = Eigen::Matrix<double, 16, 1>;
  const Matrix4 id = Matrix4::Identity();
  Mat16 op;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      op.block<4, 4>(4 * i, 4 * j) = id(i, j) * drift + drift(i, j) * id;

  const Eigen::PartialPivLU<Mat16> lu(op);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-15)) {
    std::ostringstream msg;
    msg << "Lyapunov system near-singular (rcond " << rcond << ")";
    throw NumericalError(msg.str());
  }
  const Vec16 rhs = -Eigen::Map<const Vec16>(diffusion.data());
  const Vec16 sol = lu.solve(rhs);

  CovarianceState st;
  st.drift = drift;
  st.diffusion = diffusion;
  st.v = Eigen::Map<const Matrix4>(sol.data());
  st.v = 0.5 * (st.v + st.v.transpose()).eval();

  const double res = lyapunov_residual(drift, st.v, diffusion).norm();
  if (res > 1e-10 * diffusion.norm()) {
    std::ostringstream msg;
    msg << "Lyapunov residual " << res << " exceeds 1e-10 |D| (rcond " << rcond << ")";
    throw NumericalError(msg.str());
  }
  return st;
}

/// Fixed-step RK4 integration of dV/dt = A V + V A^T + D.
inline Matrix4 evolve_covariance(const Matrix4& a, const Matrix4& d, Matrix4 v,
                                 double t_end, std::size_t steps) {
  const double h = t_end / static_cast<double>(steps);
  auto rhs = [&](const Matrix4& x) -> Matrix4 { return a * x + x * a.transpose() + d; };
  for (std::size_t s = 0; s < steps; ++s) {
    const Matrix4 k1 = rhs(v);
    const Matrix4 k2 = rhs(v + 0.5 * h * k1);
    const Matrix4 k3 = rhs(v + 0.5 * h * k2);
    const Matrix4 k4 = rhs(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

/// Integrates from V0 for 20 / min|Re lambda| with a step resolving the
/// fastest eigenvalue.
inline Matrix4 integrate_to_steady(const Matrix4& a, const Matrix4& d, const Matrix4& v0) {
  const auto roots = quartic_roots(characteristic_polynomial(a));
  double slowest = std::numeric_limits<double>::infinity(), fastest = 0.0;
  for (const auto& r : roots) {
    slowest = std::min(slowest, std::abs(r.real()));
    fastest = std::max(fastest, std::abs(r));
  }
  if (!(slowest > 0.0)) throw InfeasibleError("no steady state: marginal or unstable drift");
  const double t_end = 20.0 / slowest;
  const double h = 0.25 / fastest;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / h));
  return evolve_covariance(a, d, v0, t_end, steps);
}

/// Smallest eigenvalue of V + i Omega / 2; >= 0 for a physical Gaussian state.
inline double physicality_margin(const Matrix4& v) {
  Eigen::Matrix4cd h = v.cast<complex>();
  for (int k = 0; k < 2; ++k) {
    h(2 * k, 2 * k + 1) += complex{0.0, 0.5};
    h(2 * k + 1, 2 * k) -= complex{0.0, 0.5};
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(h, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

inline bool is_physical(const Matrix4& v, double tol = 1e-9) {
  return (v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, v.norm()) &&
         physicality_margin(v) >= -tol;
}

/// <b^dag b> = (V_33 + V_44 - 1) / 2
inline double exact_phonon(const CovarianceState& st) {
  const double n = (st.v(2, 2) + st.v(3, 3) - 1.0) / 2.0;
  if (n < -1e-9) {
    std::ostringstream msg;
    msg << "unphysical covariance: phonon number " << n;
    throw NumericalError(msg.str());
  }
  return n;
}

inline double cavity_occupation(const CovarianceState& st) {
  return (st.v(0, 0) + st.v(1, 1) - 1.0) / 2.0;
}

/// Convenience: drift + diffusion + Lyapunov for one operating point.
inline CovarianceState gaussian_steady(const EffectiveParams& eff,
                                       const std::optional<SqueezedBathParams>& bath,
                                       double n_a = 0.0) {
  return lyapunov_steady(drift_matrix(eff), diffusion_matrix(eff, bath, n_a));
}

}  // namespace kerrcool
