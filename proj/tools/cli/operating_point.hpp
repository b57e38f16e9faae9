#pragma once

// From configuration + flags to one fully specified operating point.
//
// A PointSpec is the unresolved description (scheme, how xi and the bath are
// chosen); resolve() turns it into concrete EffectiveParams and bath. Sweeps
// edit a PointSpec per grid point and resolve each one independently.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "kerrcool/gaussian.hpp"
#include "kerrcool/optimum.hpp"
#include "kerrcool/spectra.hpp"
#include "kerrcool/steady.hpp"

namespace kerrcool::cli {

/// Command-line overrides; every field beats the corresponding config key.
struct Overrides {
  std::optional<std::string> scheme;
  std::optional<double> kappa_over_4wb;
  std::optional<std::string> detuning;  // "opt" or a value in units of omega_b
  std::optional<double> g_over_wb;
  std::optional<std::string> xi;  // auto-ks | auto-opt | "re,im" in units of omega_b
  std::optional<double> n_th;
  std::optional<double> temperature_k;
  std::optional<double> gamma_b_over_wb;
  std::optional<std::string> bath;  // auto | none | manual
  std::optional<double> r_s, phi_s, n_a;
};

struct PointSpec {
  double omega_b = 1.0;
  double kappa = 1.0;
  std::optional<double> delta;  // nullopt: optimal detuning sqrt(kappa^2/4 + omega_b^2)
  double g_lin = 1.0;
  double gamma_b = 1e-6;
  std::optional<double> n_th;
  Scheme scheme = Scheme::SB;
  XiSource xi_source = XiSource::None;
  complex xi{0.0, 0.0};
  BathMode bath_mode = BathMode::Auto;
  double r_s = 0.0, phi_s = 0.0;
  double n_a = 0.0;
  /// Gate coupling for auto-opt; nullopt gates at g_lin.
  std::optional<double> gate_coupling;
  /// Physical omega_b (rad/s) when known; needed only for temperature input.
  std::optional<double> physical_omega_b;
};

struct OperatingPoint {
  EffectiveParams eff;
  std::optional<SqueezedBathParams> bath;
  double n_a = 0.0;
  bool n_th_known = false;
  Scheme requested = Scheme::SB;
  Scheme scheme = Scheme::SB;  // classify(xi, r_s) of what was built
  std::optional<OptimumResult> optimum;

  CavityBath cavity_bath() const {
    return bath ? CavityBath::squeezed(*bath) : CavityBath::thermal(n_a);
  }
};

inline double optimal_detuning(double kappa, double omega_b) {
  return std::sqrt(kappa * kappa / 4.0 + omega_b * omega_b);
}

inline OperatingPoint resolve(const PointSpec& spec) {
  OperatingPoint op;
  op.requested = spec.scheme;
  EffectiveParams& e = op.eff;
  e.omega_b = spec.omega_b;
  e.kappa = spec.kappa;
  e.delta = spec.delta.value_or(optimal_detuning(spec.kappa, spec.omega_b));
  e.g_lin = spec.g_lin;
  e.gamma_b = spec.gamma_b;
  e.n_th = spec.n_th.value_or(0.0);
  op.n_th_known = spec.n_th.has_value();
  op.n_a = spec.n_a;
  validate(e);

  const bool kerr = spec.scheme == Scheme::KS || spec.scheme == Scheme::HS;
  const bool squeezed = spec.scheme == Scheme::SS || spec.scheme == Scheme::HS;
  if (!kerr && spec.xi_source != XiSource::None && spec.xi != complex{})
    throw ConfigError(std::string("scheme ") + std::string(to_string(spec.scheme)) +
                      " requires xi = 0");
  if (!squeezed && spec.bath_mode == BathMode::Manual && spec.r_s > 0.0)
    throw ConfigError(std::string("scheme ") + std::string(to_string(spec.scheme)) +
                      " takes no squeezed bath");

  if (kerr) {
    switch (spec.xi_source) {
      case XiSource::None:
      case XiSource::AutoKS:
        e.xi = xi_ks(e);
        break;
      case XiSource::Value:
        e.xi = spec.xi;
        break;
      case XiSource::AutoOpt: {
        OptimizeOptions o;
        o.mode = spec.scheme == Scheme::HS ? OptimizeMode::HS : OptimizeMode::KS;
        o.stability_coupling = spec.gate_coupling;
        if (spec.scheme == Scheme::HS && spec.bath_mode == BathMode::Manual)
          o.hold_bath = SqueezedBathParams::make(spec.r_s, spec.phi_s);
        op.optimum = optimize_xi(e, o);
        e.xi = op.optimum->xi_opt;
        break;
      }
    }
  }

  if (squeezed) {
    if (spec.bath_mode == BathMode::Manual) {
      op.bath = SqueezedBathParams::make(spec.r_s, spec.phi_s);
    } else if (spec.bath_mode == BathMode::Auto) {
      op.bath = (spec.scheme == Scheme::SS ? ss_condition(e) : hs_condition(e)).value();
    }
  }
  op.scheme = classify(e.xi, op.bath ? op.bath->r_s() : 0.0);
  return op;
}

struct SpecProvenance {
  json fields = json::object();
  std::vector<std::string> gaps;
};

/// Builds the point description from config + flags. When the config has a
/// model section but no effective section, the effective model comes from the
/// smallest-|m_s|^2 steady state.
inline PointSpec build_spec(const RunConfig& cfg, const Overrides& ov, SpecProvenance& prov) {
  PointSpec s;
  const EffectiveSection& es = cfg.effective;
  const bool have_effective = es.kappa || es.kappa_over_4wb || es.delta || es.optimal_detuning ||
                              es.g_lin || es.omega_b || ov.kappa_over_4wb;

  if (cfg.model && !have_effective) {
    const auto roots = solve_steady(*cfg.model);
    const auto [map, eff] = eliminate(*cfg.model, roots.front());
    s.omega_b = eff.omega_b;
    s.kappa = eff.kappa;
    s.delta = eff.delta;
    s.g_lin = eff.g_lin;
    s.gamma_b = eff.gamma_b;
    s.n_th = eff.n_th;
    s.physical_omega_b = eff.omega_b;
    s.xi_source = XiSource::Value;
    s.xi = eff.xi;
    s.scheme = classify(eff.xi, 0.0);
    prov.fields["source"] = "model: smallest-|m_s|^2 steady state, magnon eliminated";
    prov.fields["steady_roots"] = roots.size();
    prov.fields["eta"] = map.eta;
  } else {
    prov.fields["source"] = "effective";
    if (es.omega_b) {
      s.omega_b = *es.omega_b;
      s.physical_omega_b = *es.omega_b;
    }
    if (ov.kappa_over_4wb) s.kappa = 4.0 * s.omega_b * *ov.kappa_over_4wb;
    else if (es.kappa_over_4wb) s.kappa = 4.0 * s.omega_b * *es.kappa_over_4wb;
    else if (es.kappa) s.kappa = *es.kappa;
    else throw ConfigError("kappa is required (effective.kappa_* or --kappa-over-4wb)");

    if (ov.detuning) {
      if (*ov.detuning == "opt") {
        s.delta.reset();
      } else {
        try {
          s.delta = std::stod(*ov.detuning) * s.omega_b;
        } catch (const std::exception&) {
          throw ConfigError("--detuning: expected \"opt\" or a number");
        }
      }
    } else if (es.optimal_detuning) {
      s.delta.reset();
    } else if (es.delta) {
      s.delta = *es.delta;
    } else {
      throw ConfigError("detuning is required (effective.delta_* or --detuning)");
    }
    prov.fields["delta"] = s.delta ? "given" : "optimal sqrt(kappa^2/4 + omega_b^2)";

    if (ov.g_over_wb) s.g_lin = *ov.g_over_wb * s.omega_b;
    else if (es.g_lin) s.g_lin = *es.g_lin;
    else prov.fields["g_lin"] = "defaulted to omega_b: rates are in units of G^2 / omega_b";

    if (ov.gamma_b_over_wb) s.gamma_b = *ov.gamma_b_over_wb * s.omega_b;
    else if (es.gamma_b) s.gamma_b = *es.gamma_b;
    else {
      s.gamma_b = 1e-6 * s.omega_b;
      prov.fields["gamma_b"] = "defaulted to 1e-6 omega_b (10 Hz at omega_b / 2pi = 10 MHz)";
    }
    s.n_th = es.n_th;
    s.xi_source = es.xi_source;
    s.xi = es.xi;
  }

  if (ov.n_th && ov.temperature_k) throw ConfigError("give --n-th or --temperature-k, not both");
  if (ov.n_th) s.n_th = *ov.n_th;
  if (ov.temperature_k) {
    if (!s.physical_omega_b)
      throw ConfigError("--temperature-k needs omega_b in physical units (effective.omega_b_hz)");
    s.n_th = n_th_from_temperature(*ov.temperature_k, *s.physical_omega_b);
    prov.fields["n_th"] = "Bose-Einstein occupation at the requested temperature";
  }
  if (!s.n_th) prov.gaps.push_back("n_th not supplied: classical limit n_c and n_b are undefined");

  if (ov.xi) {
    if (*ov.xi == "auto-ks") s.xi_source = XiSource::AutoKS;
    else if (*ov.xi == "auto-opt") s.xi_source = XiSource::AutoOpt;
    else {
      const auto comma = ov.xi->find(',');
      try {
        const double re = std::stod(ov.xi->substr(0, comma));
        const double im = comma == std::string::npos ? 0.0 : std::stod(ov.xi->substr(comma + 1));
        s.xi = complex{re, im} * s.omega_b;
      } catch (const std::exception&) {
        throw ConfigError("--xi: expected auto-ks, auto-opt or re,im");
      }
      s.xi_source = XiSource::Value;
    }
  }

  s.bath_mode = cfg.bath.mode;
  if (cfg.bath.r_s) s.r_s = *cfg.bath.r_s;
  if (cfg.bath.phi_s) s.phi_s = *cfg.bath.phi_s;
  s.n_a = cfg.bath.n_a;
  if (ov.bath) {
    if (*ov.bath == "auto") s.bath_mode = BathMode::Auto;
    else if (*ov.bath == "none") s.bath_mode = BathMode::None;
    else if (*ov.bath == "manual") s.bath_mode = BathMode::Manual;
    else throw ConfigError("--bath: expected auto, none or manual");
  }
  if (ov.r_s || ov.phi_s) {
    if (!ov.bath) s.bath_mode = BathMode::Manual;
    if (ov.r_s) s.r_s = *ov.r_s;
    if (ov.phi_s) s.phi_s = *ov.phi_s;
  }
  if (ov.n_a) s.n_a = *ov.n_a;

  const std::optional<Scheme> requested =
      ov.scheme ? scheme_from_string(*ov.scheme) : cfg.scheme;
  if (ov.scheme && !requested) throw ConfigError("--scheme: expected SB, KS, SS or HS");
  if (requested) {
    s.scheme = *requested;
  } else if (!cfg.model || have_effective) {
    const bool kerr = s.xi_source != XiSource::None;
    const bool squeezed = s.bath_mode == BathMode::Manual && s.r_s > 0.0;
    s.scheme = kerr ? (squeezed ? Scheme::HS : Scheme::KS) : (squeezed ? Scheme::SS : Scheme::SB);
  }
  return s;
}

inline json describe(const OperatingPoint& op) {
  json j;
  j["scheme_requested"] = std::string(to_string(op.requested));
  j["scheme"] = std::string(to_string(op.scheme));
  j["omega_b"] = op.eff.omega_b;
  j["kappa"] = op.eff.kappa;
  j["kappa_over_4wb"] = op.eff.kappa / (4.0 * op.eff.omega_b);
  j["delta"] = op.eff.delta;
  j["g_lin"] = op.eff.g_lin;
  j["xi_re"] = op.eff.xi.real();
  j["xi_im"] = op.eff.xi.imag();
  j["gamma_b"] = op.eff.gamma_b;
  j["n_th"] = op.n_th_known ? json(op.eff.n_th) : json(nullptr);
  if (op.bath) {
    j["bath"] = {{"r_s", op.bath->r_s()},
                 {"phi_s", op.bath->phi_s()},
                 {"n_s", op.bath->n_s()},
                 {"m_s_re", op.bath->m_s().real()},
                 {"m_s_im", op.bath->m_s().imag()}};
  } else {
    j["bath"] = {{"thermal_n_a", op.n_a}};
  }
  return j;
}

}  // namespace kerrcool::cli
