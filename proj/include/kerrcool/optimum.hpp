#pragma once

// Optimal-cooling conditions and the search over the two-photon coefficient.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "kerrcool/gaussian.hpp"
#include "kerrcool/model.hpp"
#include "kerrcool/nelder_mead.hpp"
#include "kerrcool/spectra.hpp"

namespace kerrcool {

/// xi_KS = (Delta - omega_b)/2 - i kappa/4, the root of 1 - 2 i xi chi(omega_b).
inline complex xi_ks(const EffectiveParams& eff) {
  return {(eff.delta - eff.omega_b) / 2.0, -eff.kappa / 4.0};
}

/// Outcome of solving tanh r e^{-2 i phi} = -A*(omega_b) for the bath.
struct BathCondition {
  bool feasible = false;
  double ratio_modulus = 0.0;  // |A(omega_b)|; feasible iff < 1
  SqueezedBathParams bath;

  /// The bath, or InfeasibleError naming |A(omega_b)|.
  const SqueezedBathParams& value() const {
    if (!feasible) {
      std::ostringstream msg;
      msg << "no squeezed bath nulls heating: |A(omega_b)| = " << ratio_modulus << " >= 1";
      throw InfeasibleError(msg.str());
    }
    return bath;
  }
};

namespace detail {

inline constexpr double kRoundoffRatio = 1e-13;

inline BathCondition bath_from_ratio(complex a) {
  BathCondition c;
  c.ratio_modulus = std::abs(a);
  if (!(c.ratio_modulus < 1.0)) return c;
  c.feasible = true;
  // A ratio at roundoff level means no squeezing; its phase is noise.
  if (c.ratio_modulus <= kRoundoffRatio) return c;
  c.bath = SqueezedBathParams::make(std::atanh(c.ratio_modulus), -std::arg(-std::conj(a)) / 2.0);
  return c;
}

}  // namespace detail

/// Squeezed scheme: tanh r e^{-2 i phi} = -A_0*(omega_b). Requires xi = 0.
inline BathCondition ss_condition(const EffectiveParams& params) {
  const EffectiveParams& eff = validate(params);
  if (eff.xi != complex{}) throw ValidationError("xi", "ss_condition requires xi = 0");
  return detail::bath_from_ratio(a0_ratio(eff.omega_b, eff));
}

/// Hybrid scheme: tanh r e^{-2 i phi} + A_xi*(omega_b) = 0.
inline BathCondition hs_condition(const EffectiveParams& params) {
  const EffectiveParams& eff = validate(params);
  return detail::bath_from_ratio(a_xi_ratio(eff.omega_b, eff));
}

enum class OptimizeMode { KS, HS };

struct OptimizeOptions {
  OptimizeMode mode = OptimizeMode::HS;
  /// (re_min, re_max, im_min, im_max); default [-5, 5]^2 omega_b max(1, kappa/4omega_b).
  std::optional<std::array<double, 4>> rectangle;
  int grid = 41;
  int polish_iterations = 2000;
  int polish_seeds = 4;
  double tolerance = 1e-10;
  /// Coupling used for the stability gate; defaults to eff.g_lin. Zero gives
  /// the cavity-only parametric threshold.
  std::optional<double> stability_coupling;
  /// KS only: restrict to the heating-null set (which is the single point xi_KS).
  bool require_heating_null = true;
  /// HS only: hold the bath fixed instead of re-solving the null condition per xi.
  std::optional<SqueezedBathParams> hold_bath;
  bool keep_surface = false;
};

struct SurfaceSample {
  double xi_re = 0.0;
  double xi_im = 0.0;
  double value = 0.0;  // objective; -inf where infeasible or unstable
};

struct OptimumResult {
  complex xi_opt{0.0, 0.0};
  double r_s_opt = 0.0;
  double phi_s_opt = 0.0;
  double net_rate_opt = 0.0;
  double objective_opt = 0.0;  // what was maximized (net rate, or -heating ratio)
  double heating_ratio = 0.0;  // Gamma+ / Gamma- at the optimum
  bool feasible = false;       // heating null certified at the optimum
  bool stability_ok = false;
  double paper_claim_rate = std::numeric_limits<double>::quiet_NaN();  // HS: Gamma_KS^- cosh^2 r
  int evaluations = 0;
  std::vector<SurfaceSample> surface;
};

namespace detail {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

struct XiObjective {
  const EffectiveParams& base;
  const OptimizeOptions& opt;
  double gate_coupling;

  EffectiveParams at(complex xi) const {
    EffectiveParams e = base;
    e.xi = xi;
    return e;
  }

  bool admissible(const EffectiveParams& e) const {
    EffectiveParams gate = e;
    gate.g_lin = gate_coupling;
    return is_stable(drift_matrix(gate)).stable;
  }

  std::optional<SqueezedBathParams> bath_for(const EffectiveParams& e) const {
    if (opt.mode == OptimizeMode::KS) return std::nullopt;
    if (opt.hold_bath) return opt.hold_bath;
    const BathCondition c = hs_condition(e);
    if (!c.feasible) return std::nullopt;
    return c.bath;
  }

  bool heating_null_search() const {
    return opt.mode == OptimizeMode::KS && opt.require_heating_null;
  }

  double operator()(complex xi) const {
    try {
      const EffectiveParams e = at(xi);
      if (!admissible(e)) return kMinusInf;
      const auto bath = bath_for(e);
      if (opt.mode == OptimizeMode::HS && !bath) return kMinusInf;
      const double gm = spectrum(e.omega_b, e, bath).value;
      const double gp = spectrum(-e.omega_b, e, bath).value;
      if (heating_null_search()) return gm > 0.0 ? -gp / gm : kMinusInf;
      return gm - gp;
    } catch (const SpectrumError&) {
      return kMinusInf;
    }
  }
};

}  // namespace detail

/// Grid scan over (Re xi, Im xi) followed by Nelder-Mead polish from the best
/// grid points. Infeasible and unstable points score -inf.
inline OptimumResult optimize_xi(const EffectiveParams& params, const OptimizeOptions& opt = {}) {
  const EffectiveParams& eff = validate(params);
  if (opt.grid < 1) throw ValidationError("grid", "grid must be >= 1");

  const double span = 5.0 * eff.omega_b * std::max(1.0, eff.kappa / (4.0 * eff.omega_b));
  const auto rect = opt.rectangle.value_or(std::array<double, 4>{-span, span, -span, span});
  const detail::XiObjective objective{eff, opt, opt.stability_coupling.value_or(eff.g_lin)};

  OptimumResult res;
  struct Sample {
    double re, im, value;
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(opt.grid) * opt.grid);
  auto axis = [&](double lo, double hi, int k) {
    return opt.grid == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (opt.grid - 1);
  };
  for (int i = 0; i < opt.grid; ++i) {
    for (int j = 0; j < opt.grid; ++j) {
      const double re = axis(rect[0], rect[1], i), im = axis(rect[2], rect[3], j);
      samples.push_back({re, im, objective({re, im})});
      ++res.evaluations;
    }
  }
  if (opt.keep_surface)
    for (const auto& s : samples) res.surface.push_back({s.re, s.im, s.value});

  std::vector<Sample> ranked = samples;
  std::sort(ranked.begin(), ranked.end(),
            [](const Sample& a, const Sample& b) { return a.value > b.value; });
  if (ranked.empty() || !(ranked.front().value > detail::kMinusInf))
    throw InfeasibleError("no feasible xi in the search rectangle");

  Sample best = ranked.front();
  if (opt.polish_iterations > 0) {
    const double step_re = opt.grid > 1 ? (rect[1] - rect[0]) / (opt.grid - 1) : 0.1 * eff.omega_b;
    const double step_im = opt.grid > 1 ? (rect[3] - rect[2]) / (opt.grid - 1) : 0.1 * eff.omega_b;
    SimplexOptions so;
    so.max_iterations = opt.polish_iterations;
    so.f_tolerance = opt.tolerance;
    so.x_tolerance = opt.tolerance;
    so.scale = std::max({std::abs(rect[0]), std::abs(rect[1]), std::abs(rect[2]),
                         std::abs(rect[3]), eff.omega_b});
    const int seeds = std::min<int>(opt.polish_seeds, static_cast<int>(ranked.size()));
    for (int s = 0; s < seeds; ++s) {
      if (!(ranked[s].value > detail::kMinusInf)) break;
      auto cost = [&](const std::array<double, 2>& x) {
        const double v = objective({x[0], x[1]});
        return v > detail::kMinusInf ? -v : std::numeric_limits<double>::infinity();
      };
      const auto nm = nelder_mead<2>(cost, {ranked[s].re, ranked[s].im},
                                     {0.5 * step_re, 0.5 * step_im}, so);
      res.evaluations += nm.evaluations;
      if (-nm.value > best.value) best = {nm.x[0], nm.x[1], -nm.value};
    }
    if (objective.heating_null_search()) {
      // The heating amplitude 1 - 2 i xi chi(omega_b) is affine in xi, so one
      // Newton step from the polished point lands on the null.
      const complex xi0{best.re, best.im};
      const complex slope = -2.0 * complex{0.0, 1.0} * susceptibility(eff.omega_b, eff);
      const complex refined = xi0 - (1.0 + slope * xi0) / slope;
      const double v = objective(refined);
      ++res.evaluations;
      if (v >= best.value) best = {refined.real(), refined.imag(), v};
    }
  }

  const EffectiveParams at_opt = objective.at({best.re, best.im});
  const auto bath = objective.bath_for(at_opt);
  const double gm = spectrum(at_opt.omega_b, at_opt, bath).value;
  const double gp = spectrum(-at_opt.omega_b, at_opt, bath).value;
  res.xi_opt = {best.re, best.im};
  res.objective_opt = best.value;
  res.net_rate_opt = gm - gp;
  res.heating_ratio = gm > 0.0 ? gp / gm : std::numeric_limits<double>::infinity();
  res.feasible = res.heating_ratio < 1e-10;
  res.stability_ok = objective.admissible(at_opt);
  if (bath) {
    res.r_s_opt = bath->r_s();
    res.phi_s_opt = bath->phi_s();
    const double cosh_r = std::cosh(bath->r_s());
    res.paper_claim_rate = v_ks(at_opt.omega_b, at_opt).value * cosh_r * cosh_r;
  }
  return res;
}

}  // namespace kerrcool
