#pragma once

// Weak-coupling quantum-noise formulas for the four cooling schemes.
//
// Rate normalization: V_SB(w) = G^2 kappa |chi(w)|^2. The x_zpf^-2 prefactor
// of the force spectrum is an overall constant that cancels in every rate
// ratio and phonon number, so it is dropped and spectra are rates.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>

#include "kerrcool/model.hpp"

namespace kerrcool {

struct SpectrumPoint {
  double omega = 0.0;
  double value = 0.0;
};

/// Raised when a spectrum denominator vanishes (parametric divergence) or a
/// ratio is undefined.
class SpectrumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline constexpr double kDivergenceThreshold = 1e-14;

/// chi(w) = 1 / (kappa/2 - i (w - Delta))
inline complex susceptibility(double omega, const EffectiveParams& eff) {
  return 1.0 / complex{eff.kappa / 2.0, -(omega - eff.delta)};
}

namespace detail {

constexpr complex kI{0.0, 1.0};

inline double v_sb_value(double omega, const EffectiveParams& eff) {
  return eff.g_lin * eff.g_lin * eff.kappa * std::norm(susceptibility(omega, eff));
}

// 1 - 4 |xi|^2 chi(w) chi*(-w)
inline complex parametric_denominator(double omega, const EffectiveParams& eff) {
  return 1.0 - 4.0 * std::norm(eff.xi) * susceptibility(omega, eff) *
                   std::conj(susceptibility(-omega, eff));
}

inline complex checked_parametric_denominator(double omega, const EffectiveParams& eff) {
  const complex d = parametric_denominator(omega, eff);
  if (std::abs(d) < kDivergenceThreshold) {
    std::ostringstream msg;
    msg << "parametric divergence at omega = " << omega;
    throw SpectrumError(msg.str());
  }
  return d;
}

// 1 - 2 i xi chi(-w). At w = -w_b this is the Kerr heating amplitude.
inline complex kerr_numerator(double omega, const EffectiveParams& eff) {
  return 1.0 - 2.0 * kI * eff.xi * susceptibility(-omega, eff);
}

}  // namespace detail

inline SpectrumPoint v_sb(double omega, const EffectiveParams& eff) {
  return {omega, detail::v_sb_value(omega, eff)};
}

/// V_KS = V_SB |1 - 2 i xi chi(-w)|^2 / |1 - 4 |xi|^2 chi(w) chi*(-w)|^2
inline SpectrumPoint v_ks(double omega, const EffectiveParams& eff) {
  const complex den = detail::checked_parametric_denominator(omega, eff);
  return {omega, detail::v_sb_value(omega, eff) *
                     std::norm(detail::kerr_numerator(omega, eff)) / std::norm(den)};
}

/// A_0(w) = chi(-w) / chi*(w)
inline complex a0_ratio(double omega, const EffectiveParams& eff) {
  return susceptibility(-omega, eff) / std::conj(susceptibility(omega, eff));
}

/// A_xi(w) = A_0(w) [1 + 2 i xi* chi*(w)] / [1 - 2 i xi chi(-w)]
inline complex a_xi_ratio(double omega, const EffectiveParams& eff) {
  const complex den = detail::kerr_numerator(omega, eff);
  if (std::abs(den) < kDivergenceThreshold) {
    std::ostringstream msg;
    msg << "A_xi undefined at omega = " << omega << ": factor 1 - 2i xi chi(-omega) vanishes";
    throw SpectrumError(msg.str());
  }
  const complex num =
      1.0 + 2.0 * detail::kI * std::conj(eff.xi) * std::conj(susceptibility(omega, eff));
  return a0_ratio(omega, eff) * num / den;
}

/// V_HS = V_KS |cosh r + A_xi e^{-2 i phi} sinh r|^2, with the A_xi
/// denominator cleared so the removable 0 * inf at a Kerr null is finite.
/// With xi = 0 this is the squeezed-scheme spectrum V_SS.
inline SpectrumPoint v_hs(double omega, const EffectiveParams& eff,
                          const SqueezedBathParams& bath) {
  const complex den = detail::checked_parametric_denominator(omega, eff);
  const complex squeeze = std::polar(std::sinh(bath.r_s()), -2.0 * bath.phi_s());
  const complex a0_num =
      a0_ratio(omega, eff) *
      (1.0 + 2.0 * detail::kI * std::conj(eff.xi) * std::conj(susceptibility(omega, eff)));
  const complex amp = detail::kerr_numerator(omega, eff) * std::cosh(bath.r_s()) + a0_num * squeeze;
  return {omega, detail::v_sb_value(omega, eff) * std::norm(amp) / std::norm(den)};
}

/// V_SS: the squeezed scheme without Kerr magnons (xi forced to zero).
inline SpectrumPoint v_ss(double omega, EffectiveParams eff, const SqueezedBathParams& bath) {
  eff.xi = complex{};
  return v_hs(omega, eff, bath);
}

/// Spectrum for whichever scheme (xi, bath) describe.
inline SpectrumPoint spectrum(double omega, const EffectiveParams& eff,
                              const std::optional<SqueezedBathParams>& bath) {
  if (bath && bath->r_s() > 0.0) return v_hs(omega, eff, *bath);
  return v_ks(omega, eff);
}

/// Cooling/heating rates at +/- omega_b and the phonon-number limits.
inline CoolingReport rates(const EffectiveParams& params,
                           const std::optional<SqueezedBathParams>& bath = std::nullopt) {
  const EffectiveParams& eff = validate(params);
  if (bath) validate(*bath);
  CoolingReport rep;
  rep.scheme = classify(eff.xi, bath ? bath->r_s() : 0.0);
  rep.gamma_minus = spectrum(eff.omega_b, eff, bath).value;
  rep.gamma_plus = spectrum(-eff.omega_b, eff, bath).value;
  rep.net_rate = rep.gamma_minus - rep.gamma_plus;

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  rep.net_cooling = rep.net_rate > 0.0;
  if (rep.net_cooling) {
    rep.n_c = eff.n_th * eff.gamma_b / rep.net_rate;
    rep.n_q = rep.gamma_plus / rep.net_rate;
    rep.n_b = rep.n_c + rep.n_q;
  } else {
    rep.n_c = rep.n_q = rep.n_b = nan;
  }
  const double damping = eff.gamma_b + rep.net_rate;
  rep.n_b_full = damping > 0.0 ? (eff.gamma_b * eff.n_th + rep.gamma_plus) / damping : nan;
  return rep;
}

}  // namespace kerrcool
