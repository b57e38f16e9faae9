#pragma once

// Domain types shared by every kerrcool module.
//
// Units: every frequency, rate and coupling is an angular frequency. The
// formulas are homogeneous in frequency, so "normalized mode" (omega_b = 1,
// everything in units of omega_b) is just a particular choice of inputs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kerrcool {

using complex = std::complex<double>;

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter invariant is violated. `field()` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The requested operating point does not exist (no real bath solves the
/// null condition, the drift is unstable, the elimination is invalid, ...).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An iterative or direct solve failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Driven cavity + Kerr magnon + mechanics, all detunings relative to the drive.
struct FullSystemParams {
  double delta_a = 0.0;     // cavity-drive detuning
  double omega_b = 1.0;     // mechanical frequency
  double g0 = 0.0;          // single-photon optomechanical coupling
  double delta_m = 0.0;     // magnon-drive detuning
  double kerr = 0.0;        // Kerr coefficient K (signed)
  double j_coupling = 0.0;  // photon-magnon coupling J
  double drive_amp = 0.0;   // epsilon_d
  double kappa_a = 1.0;
  double kappa_m = 1.0;
  double gamma_b = 1e-6;
  double n_th = 0.0;
  std::optional<double> x_zpf;  // metres, metadata only
  std::optional<double> m_eff;  // kg, metadata only
};

/// Convenience: absolute frequencies reduced to detunings against the drive.
struct AbsoluteFrequencies {
  double omega_a;
  double omega_m;
  double omega_d;
};

inline FullSystemParams with_absolute_frequencies(FullSystemParams p,
                                                  const AbsoluteFrequencies& f) {
  p.delta_a = f.omega_a - f.omega_d;
  p.delta_m = f.omega_m - f.omega_d;
  return p;
}

/// Reduced cavity-mechanics model after the magnon has been eliminated.
struct EffectiveParams {
  double delta = 0.0;    // effective detuning
  double kappa = 1.0;    // effective cavity decay
  double g_lin = 0.0;    // linearized coupling G, real and >= 0
  complex xi{0.0, 0.0};  // two-photon coefficient
  double omega_b = 1.0;
  double gamma_b = 1e-6;
  double n_th = 0.0;
};

/// Broadband squeezed vacuum. The correlators are derived, never set directly.
class SqueezedBathParams {
 public:
  SqueezedBathParams() = default;

  /// phi_s is wrapped into [0, 2 pi). Throws ValidationError for r_s < 0.
  static SqueezedBathParams make(double r_s, double phi_s);

  double r_s() const noexcept { return r_s_; }
  double phi_s() const noexcept { return phi_s_; }
  /// N_s = sinh^2 r_s
  double n_s() const noexcept { return n_s_; }
  /// M_s = e^{-2 i phi_s} sinh r_s cosh r_s
  complex m_s() const noexcept { return m_s_; }

 private:
  double r_s_ = 0.0;
  double phi_s_ = 0.0;
  double n_s_ = 0.0;
  complex m_s_{0.0, 0.0};
};

enum class Scheme { SB, KS, SS, HS };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::SB: return "SB";
    case Scheme::KS: return "KS";
    case Scheme::SS: return "SS";
    case Scheme::HS: return "HS";
  }
  return "?";
}

inline std::optional<Scheme> scheme_from_string(std::string_view s) {
  if (s == "SB") return Scheme::SB;
  if (s == "KS") return Scheme::KS;
  if (s == "SS") return Scheme::SS;
  if (s == "HS") return Scheme::HS;
  return std::nullopt;
}

/// Total classification: Kerr assist is "xi != 0", squeezing is "r_s > 0".
inline Scheme classify(complex xi, double r_s) noexcept {
  const bool kerr = xi != complex{0.0, 0.0};
  const bool squeezed = r_s > 0.0;
  if (kerr) return squeezed ? Scheme::HS : Scheme::KS;
  return squeezed ? Scheme::SS : Scheme::SB;
}

struct CoolingReport {
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  double net_rate = 0.0;
  // Paper form: n_c = n_th gamma_b / net, n_q = gamma_plus / net, n_b = n_c + n_q.
  // NaN when net_rate <= 0.
  double n_c = 0.0;
  double n_q = 0.0;
  double n_b = 0.0;
  // (gamma_b n_th + gamma_plus) / (gamma_b + net); NaN when the denominator <= 0.
  double n_b_full = 0.0;
  bool net_cooling = true;
  Scheme scheme = Scheme::SB;
};

namespace detail {

inline bool finite(double x) { return std::isfinite(x); }

[[noreturn]] inline void fail(const char* field, const std::string& what) {
  throw ValidationError(field, what);
}

inline void require_positive(const char* field, double v) {
  if (!(v > 0.0) || !finite(v)) fail(field, std::string(field) + " must be > 0");
}

inline void require_non_negative(const char* field, double v) {
  if (!(v >= 0.0) || !finite(v)) fail(field, std::string(field) + " must be >= 0");
}

inline void require_finite(const char* field, double v) {
  if (!finite(v)) fail(field, std::string(field) + " must be finite");
}

}  // namespace detail

inline const FullSystemParams& validate(const FullSystemParams& p) {
  using namespace detail;
  require_finite("delta_a", p.delta_a);
  require_positive("omega_b", p.omega_b);
  require_finite("g0", p.g0);
  require_finite("delta_m", p.delta_m);
  require_finite("kerr", p.kerr);
  require_finite("j_coupling", p.j_coupling);
  require_non_negative("drive_amp", p.drive_amp);
  require_positive("kappa_a", p.kappa_a);
  require_positive("kappa_m", p.kappa_m);
  require_positive("gamma_b", p.gamma_b);
  require_non_negative("n_th", p.n_th);
  if (p.x_zpf && p.m_eff) {
    require_positive("m_eff", *p.m_eff);
    const double expected = std::sqrt(kHbar / (2.0 * *p.m_eff * p.omega_b));
    if (std::abs(*p.x_zpf - expected) > 1e-9 * expected)
      fail("x_zpf", "x_zpf must equal sqrt(hbar / (2 m_eff omega_b))");
  }
  return p;
}

inline const EffectiveParams& validate(const EffectiveParams& p) {
  using namespace detail;
  require_finite("delta", p.delta);
  require_positive("kappa", p.kappa);
  require_non_negative("g_lin", p.g_lin);
  require_finite("xi", p.xi.real());
  require_finite("xi", p.xi.imag());
  require_positive("omega_b", p.omega_b);
  require_positive("gamma_b", p.gamma_b);
  require_non_negative("n_th", p.n_th);
  return p;
}

inline const SqueezedBathParams& validate(const SqueezedBathParams& b) {
  using namespace detail;
  require_non_negative("r_s", b.r_s());
  if (!(b.phi_s() >= 0.0 && b.phi_s() < kTwoPi)) fail("phi_s", "phi_s must lie in [0, 2pi)");
  const double lhs = std::norm(b.m_s());
  const double rhs = b.n_s() * (b.n_s() + 1.0);
  if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs))
    fail("m_s", "|m_s|^2 must equal n_s (n_s + 1)");
  return b;
}

/// Wraps an angle into [0, 2 pi).
inline double wrap_two_pi(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

inline SqueezedBathParams SqueezedBathParams::make(double r_s, double phi_s) {
  detail::require_non_negative("r_s", r_s);
  detail::require_finite("phi_s", phi_s);
  SqueezedBathParams b;
  b.r_s_ = r_s;
  b.phi_s_ = wrap_two_pi(phi_s);
  const double sh = std::sinh(r_s);
  b.n_s_ = sh * sh;
  b.m_s_ = std::polar(sh * std::cosh(r_s), -2.0 * b.phi_s_);
  return b;
}

/// Bose-Einstein occupation of a mode at angular frequency omega (rad/s) and
/// temperature T (K).
inline double n_th_from_temperature(double temperature_k, double omega_rad) {
  detail::require_non_negative("temperature", temperature_k);
  detail::require_positive("omega_b", omega_rad);
  if (temperature_k == 0.0) return 0.0;
  return 1.0 / std::expm1(kHbar * omega_rad / (kBoltzmann * temperature_k));
}

}  // namespace kerrcool
