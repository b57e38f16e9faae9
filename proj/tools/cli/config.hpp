#pragma once

// Strict JSON configuration. Frequencies carry their unit in the key suffix:
// `_hz` (value / 2pi, converted on ingestion), `_rad` (angular) or `_over_wb`
// (multiples of omega_b). Unknown keys are errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrcool/model.hpp"

namespace kerrcool::cli {

using json = nlohmann::json;

/// Bad input: unreadable config, unknown key, inconsistent units. Exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class XiSource { None, AutoKS, AutoOpt, Value };
enum class BathMode { Auto, None, Manual };
enum class Spacing { Linear, Log };

struct EffectiveSection {
  std::optional<double> omega_b, delta, kappa, g_lin, gamma_b, n_th;
  std::optional<double> kappa_over_4wb;
  bool optimal_detuning = false;
  XiSource xi_source = XiSource::None;
  complex xi{0.0, 0.0};
};

struct BathSection {
  BathMode mode = BathMode::Auto;
  std::optional<double> r_s, phi_s;
  double n_a = 0.0;
};

struct SweepSection {
  std::string axis;
  double start = 0.0, stop = 0.0;
  int count = 0;
  Spacing spacing = Spacing::Linear;
  std::vector<std::string> outputs;
};

struct RunConfig {
  std::optional<FullSystemParams> model;
  EffectiveSection effective;
  BathSection bath;
  std::optional<SweepSection> sweep;
  std::optional<Scheme> scheme;
  std::uint64_t seed = 0;
};

namespace detail {

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
  return v;
}

/// Tracks which keys of one JSON object were consumed.
class Section {
 public:
  Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {
    if (!obj_.is_object()) throw ConfigError(name_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* raw(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  std::optional<double> plain(const std::string& key) {
    const json* j = raw(key);
    if (!j) return std::nullopt;
    return number(*j, name_ + "." + key);
  }

  std::optional<std::string> text(const std::string& key) {
    const json* j = raw(key);
    if (!j) return std::nullopt;
    if (!j->is_string()) throw ConfigError(name_ + "." + key + ": expected a string");
    return j->get<std::string>();
  }

  /// A frequency given with exactly one of the unit suffixes.
  std::optional<double> frequency(const std::string& base, std::optional<double> omega_b) {
    std::optional<double> out;
    int given = 0;
    if (auto v = plain(base + "_hz")) {
      out = kTwoPi * *v;
      ++given;
    }
    if (auto v = plain(base + "_rad")) {
      out = *v;
      ++given;
    }
    if (has(base + "_over_wb")) {
      if (!omega_b) throw ConfigError(name_ + "." + base + "_over_wb needs omega_b");
      out = *plain(base + "_over_wb") * *omega_b;
      ++given;
    }
    if (has(base))
      throw ConfigError(name_ + "." + base +
                        ": frequency keys need a unit suffix (_hz, _rad, _over_wb)");
    if (given > 1) throw ConfigError(name_ + "." + base + ": given in more than one unit");
    return out;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError("unknown key " + name_ + "." + it.key());
  }

 private:
  const json& obj_;
  std::string name_;
  std::set<std::string> used_;
};

inline std::optional<double> omega_b_of(Section& s) {
  std::optional<double> w;
  int given = 0;
  if (auto v = s.plain("omega_b_hz")) {
    w = kTwoPi * *v;
    ++given;
  }
  if (auto v = s.plain("omega_b_rad")) {
    w = *v;
    ++given;
  }
  if (given > 1) throw ConfigError("omega_b given in more than one unit");
  return w;
}

inline FullSystemParams parse_model(const json& j) {
  Section s(j, "model");
  FullSystemParams p;
  const auto wb = omega_b_of(s);
  if (!wb) throw ConfigError("model.omega_b_hz or model.omega_b_rad is required");
  p.omega_b = *wb;
  auto req = [&](const char* base) {
    const auto v = s.frequency(base, wb);
    if (!v) throw ConfigError(std::string("model.") + base + " is required");
    return *v;
  };
  const auto omega_d = s.frequency("omega_d", wb);
  const auto omega_a = s.frequency("omega_a", wb);
  const auto omega_m = s.frequency("omega_m", wb);
  if (omega_a || omega_m || omega_d) {
    if (!(omega_a && omega_m && omega_d))
      throw ConfigError("model: absolute frequencies need omega_a, omega_m and omega_d together");
    if (s.has("delta_a_hz") || s.has("delta_a_rad") || s.has("delta_a_over_wb") ||
        s.has("delta_m_hz") || s.has("delta_m_rad") || s.has("delta_m_over_wb"))
      throw ConfigError("model: give either detunings or absolute frequencies, not both");
    p = with_absolute_frequencies(p, {*omega_a, *omega_m, *omega_d});
  } else {
    p.delta_a = req("delta_a");
    p.delta_m = req("delta_m");
  }
  p.g0 = req("g0");
  p.kerr = req("kerr");
  p.j_coupling = req("j_coupling");
  p.drive_amp = req("drive_amp");
  p.kappa_a = req("kappa_a");
  p.kappa_m = req("kappa_m");
  p.gamma_b = req("gamma_b");
  const auto n_th = s.plain("n_th");
  if (!n_th) throw ConfigError("model.n_th is required (the thermal occupation has no default)");
  p.n_th = *n_th;
  p.x_zpf = s.plain("x_zpf_m");
  p.m_eff = s.plain("m_eff_kg");
  s.finish();
  return p;
}

inline EffectiveSection parse_effective(const json& j) {
  Section s(j, "effective");
  EffectiveSection e;
  e.omega_b = omega_b_of(s);
  const double wb = e.omega_b.value_or(1.0);
  if (auto d = s.text("delta")) {
    if (*d != "opt") throw ConfigError("effective.delta: the only string value is \"opt\"");
    e.optimal_detuning = true;
  } else {
    e.delta = s.frequency("delta", wb);
  }
  e.kappa = s.frequency("kappa", wb);
  e.kappa_over_4wb = s.plain("kappa_over_4wb");
  if (e.kappa && e.kappa_over_4wb) throw ConfigError("effective: kappa and kappa_over_4wb both given");
  e.g_lin = s.frequency("g_lin", wb);
  e.gamma_b = s.frequency("gamma_b", wb);
  e.n_th = s.plain("n_th");
  if (auto x = s.text("xi")) {
    if (*x == "auto-ks") e.xi_source = XiSource::AutoKS;
    else if (*x == "auto-opt") e.xi_source = XiSource::AutoOpt;
    else throw ConfigError("effective.xi: expected \"auto-ks\", \"auto-opt\" or xi_re_*/xi_im_* keys");
  }
  const auto re = s.frequency("xi_re", wb);
  const auto im = s.frequency("xi_im", wb);
  if (re || im) {
    if (e.xi_source != XiSource::None) throw ConfigError("effective: xi given twice");
    e.xi_source = XiSource::Value;
    e.xi = {re.value_or(0.0), im.value_or(0.0)};
  }
  s.finish();
  return e;
}

inline BathSection parse_bath(const json& j) {
  Section s(j, "bath");
  BathSection b;
  if (auto m = s.text("mode")) {
    if (*m == "auto") b.mode = BathMode::Auto;
    else if (*m == "none") b.mode = BathMode::None;
    else if (*m == "manual") b.mode = BathMode::Manual;
    else throw ConfigError("bath.mode: expected auto, none or manual");
  }
  b.r_s = s.plain("r_s");
  b.phi_s = s.plain("phi_s");
  if (auto n = s.plain("n_a")) b.n_a = *n;
  if ((b.r_s || b.phi_s) && !s.has("mode")) b.mode = BathMode::Manual;
  if (b.mode == BathMode::Manual && !b.r_s) throw ConfigError("bath: manual mode needs r_s");
  s.finish();
  return b;
}

inline Spacing parse_spacing(const std::string& s) {
  if (s == "linear") return Spacing::Linear;
  if (s == "log") return Spacing::Log;
  throw ConfigError("sweep.spacing: expected linear or log");
}

inline SweepSection parse_sweep(const json& j) {
  Section s(j, "sweep");
  SweepSection w;
  if (auto a = s.text("axis")) w.axis = *a;
  if (auto v = s.plain("start")) w.start = *v;
  if (auto v = s.plain("stop")) w.stop = *v;
  if (auto v = s.plain("count")) w.count = static_cast<int>(*v);
  if (auto v = s.text("spacing")) w.spacing = parse_spacing(*v);
  if (const json* o = s.raw("outputs")) {
    if (!o->is_array()) throw ConfigError("sweep.outputs: expected an array of strings");
    for (const auto& x : *o) {
      if (!x.is_string()) throw ConfigError("sweep.outputs: expected an array of strings");
      w.outputs.push_back(x.get<std::string>());
    }
  }
  s.finish();
  return w;
}

}  // namespace detail

inline const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> axes = {"kappa_over_4wb", "g_over_wb", "g_over_2pi",
                                                "xi_re", "xi_im", "delta_over_wb", "n_th"};
  return axes;
}

inline const std::vector<std::string>& sweep_outputs() {
  static const std::vector<std::string> outs = {"rates", "n_b", "n_b_min", "spectra"};
  return outs;
}

/// Checks a sweep specification once every override has been applied.
inline void validate_sweep(const SweepSection& w) {
  if (std::find(sweep_axes().begin(), sweep_axes().end(), w.axis) == sweep_axes().end())
    throw ConfigError("sweep.axis: unknown axis \"" + w.axis + "\"");
  if (w.count < 2) throw ConfigError("sweep.count must be >= 2");
  if (w.start == w.stop) throw ConfigError("sweep.start must differ from sweep.stop");
  if (w.spacing == Spacing::Log && !(w.start > 0.0 && w.stop > 0.0))
    throw ConfigError("sweep: log spacing needs positive endpoints");
  for (const auto& o : w.outputs)
    if (std::find(sweep_outputs().begin(), sweep_outputs().end(), o) == sweep_outputs().end())
      throw ConfigError("sweep.outputs: unknown output \"" + o + "\"");
}

/// Grid points with both endpoints exact.
inline std::vector<double> sweep_points(double start, double stop, int count, Spacing spacing) {
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / (count - 1);
    x[k] = spacing == Spacing::Log
               ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
               : start + t * (stop - start);
  }
  x.front() = start;
  x.back() = stop;
  return x;
}

inline RunConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c;
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& k = it.key();
    if (k == "model") c.model = detail::parse_model(*it);
    else if (k == "effective") c.effective = detail::parse_effective(*it);
    else if (k == "bath") c.bath = detail::parse_bath(*it);
    else if (k == "sweep") c.sweep = detail::parse_sweep(*it);
    else if (k == "scheme") {
      if (!it->is_string()) throw ConfigError("scheme: expected a string");
      c.scheme = scheme_from_string(it->get<std::string>());
      if (!c.scheme) throw ConfigError("scheme: expected SB, KS, SS or HS");
    } else if (k == "seed") {
      if (!it->is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
      c.seed = it->get<std::uint64_t>();
    } else {
      throw ConfigError("unknown key " + k);
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse_config(root);
}

}  // namespace kerrcool::cli
