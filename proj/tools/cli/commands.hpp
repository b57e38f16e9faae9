#pragma once

// Subcommand bodies. Each returns the files to write plus a metadata object;
// main.cpp owns the filesystem and the exit codes.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cli/operating_point.hpp"
#include "cli/output.hpp"
#include "kerrcool/fock.hpp"

namespace kerrcool::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Artifact {
  std::string name;
  std::string text;
};

struct CommandResult {
  std::vector<Artifact> files;
  json meta = json::object();
  std::string summary;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  bool svg = false;
};

/// Evaluates f(0..n-1) on worker threads; results keep index order and the
/// lowest-index exception wins, so output does not depend on scheduling.
template <class F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        slots[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

inline json base_meta(const std::string& command, const CommonOptions& common,
                      const SpecProvenance& prov) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = common.seed;
  m["seed_note"] = "recorded for provenance; no stochastic step uses it";
  m["provenance"] = prov.fields;
  m["gaps"] = prov.gaps;
  return m;
}

// ---------------------------------------------------------------------------
// Shared evaluations

struct ExactPoint {
  double n_b = kNaN;
  double n_a = kNaN;
  bool stable = false;
};

/// Lyapunov phonon number; NaN when unstable or numerically unresolvable.
inline ExactPoint exact_point(const OperatingPoint& op) {
  const Matrix4 a = drift_matrix(op.eff);
  if (!is_stable(a).stable) return {};
  ExactPoint r;
  r.stable = true;
  try {
    const auto st = lyapunov_steady(a, diffusion_matrix(op.eff, op.cavity_bath()));
    r.n_b = exact_phonon(st);
    r.n_a = cavity_occupation(st);
  } catch (const NumericalError&) {
  }
  return r;
}

struct CouplingMinimum {
  double n_b_min = kNaN;
  double g_opt = kNaN;
};

/// Minimum over G of the exact phonon number. xi and the bath are held at
/// their resolved values; unstable couplings are excluded.
inline CouplingMinimum minimize_over_coupling(OperatingPoint op, double g_lo, double g_hi,
                                              int grid = 81) {
  auto f = [&](double log_g) {
    op.eff.g_lin = std::exp(log_g);
    const double n = exact_point(op).n_b;
    return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
  };
  const double a = std::log(g_lo), b = std::log(g_hi);
  std::vector<double> xs(grid), fs(grid);
  std::size_t best = 0;
  for (int k = 0; k < grid; ++k) {
    xs[k] = a + (b - a) * k / (grid - 1);
    fs[k] = f(xs[k]);
    if (fs[k] < fs[best]) best = k;
  }
  if (!std::isfinite(fs[best])) return {};
  double lo = xs[best > 0 ? best - 1 : 0], hi = xs[std::min<std::size_t>(best + 1, grid - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 <= f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double x = f1 <= f2 ? x1 : x2, fx = std::min(f1, f2);
  if (fs[best] < fx) x = xs[best], fx = fs[best];
  return {fx, std::exp(x)};
}

inline void require_n_th(const OperatingPoint& op, const std::string& what) {
  if (!op.n_th_known)
    throw ConfigError(what + " needs the mechanical bath occupation: pass --n-th or --temperature-k "
                             "(or effective.n_th)");
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
  double omega_min = -3.0, omega_max = 3.0;  // units of omega_b
  int points = 601;
};

inline CommandResult run_spectrum(const PointSpec& spec, const SpecProvenance& prov,
                                  const SpectrumOptions& so, const CommonOptions& common) {
  if (so.points < 2) throw ConfigError("--points must be >= 2");
  if (!(so.omega_max > so.omega_min)) throw ConfigError("--omega-max must exceed --omega-min");
  const OperatingPoint op = resolve(spec);
  const auto grid = sweep_points(so.omega_min, so.omega_max, so.points, Spacing::Linear);
  Table t{{"omega_over_wb", "value", "v_sb"}, {}};
  for (double w : grid) {
    const double omega = w * op.eff.omega_b;
    t.add({w, spectrum(omega, op.eff, op.bath).value, v_sb(omega, op.eff).value});
  }
  CommandResult res;
  res.files.push_back({"spectrum.csv", to_csv(t)});
  const double cool = spectrum(op.eff.omega_b, op.eff, op.bath).value;
  const double heat = spectrum(-op.eff.omega_b, op.eff, op.bath).value;
  res.meta = base_meta("spectrum", common, prov);
  res.meta["point"] = describe(op);
  res.meta["spectrum_at_plus_wb"] = cool;
  res.meta["spectrum_at_minus_wb"] = heat;
  res.meta["heating_over_cooling"] = number_or_text(heat / cool);
  if (common.svg) {
    res.files.push_back(
        {"spectrum.svg",
         line_plot_svg({{std::string(to_string(op.scheme)), grid, t.numeric("value")},
                        {"SB", grid, t.numeric("v_sb")}},
                       {"noise spectrum", "omega / omega_b", "V(omega)", false, false})});
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "V(+wb) = %.10g  V(-wb) = %.10g  ratio = %.3e", cool, heat,
                heat / cool);
  res.summary = buf;
  return res;
}

// ---------------------------------------------------------------------------
// rates

inline CommandResult run_rates(const PointSpec& spec, const SpecProvenance& prov,
                               const CommonOptions& common) {
  const OperatingPoint op = resolve(spec);
  const CoolingReport r = rates(op.eff, op.bath);
  const bool known = op.n_th_known;
  Table t{{"scheme", "gamma_minus", "gamma_plus", "net_rate", "n_q", "n_c", "n_b", "n_b_full",
           "net_cooling"},
          {}};
  t.add({std::string(to_string(r.scheme)), r.gamma_minus, r.gamma_plus, r.net_rate, r.n_q,
         known ? r.n_c : kNaN, known ? r.n_b : kNaN, known ? r.n_b_full : kNaN,
         std::string(r.net_cooling ? "true" : "false")});
  CommandResult res;
  res.files.push_back({"rates.csv", to_csv(t)});
  res.meta = base_meta("rates", common, prov);
  res.meta["point"] = describe(op);
  if (op.optimum) res.meta["optimum_evaluations"] = op.optimum->evaluations;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s  Gamma- = %.10g  Gamma+ = %.10g  net = %.10g  n_q = %.7f",
                std::string(to_string(r.scheme)).c_str(), r.gamma_minus, r.gamma_plus, r.net_rate,
                r.n_q);
  res.summary = buf;
  if (known) {
    std::snprintf(buf, sizeof buf, "  n_b = %.6g", r.n_b);
    res.summary += buf;
  }
  return res;
}

// ---------------------------------------------------------------------------
// steady

inline CommandResult run_steady(const RunConfig& cfg, const CommonOptions& common) {
  if (!cfg.model) throw ConfigError("steady needs a model section in the config");
  const FullSystemParams& p = *cfg.model;
  const auto roots = solve_steady(p);
  Table t{{"root", "a_re", "a_im", "m_re", "m_im", "b_re", "b_im", "m_norm2", "residual",
           "delta_eff", "kappa_eff", "g_lin", "xi_re", "xi_im", "eta", "elimination"},
          {}};
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    std::vector<Cell> row = {static_cast<double>(k), r.a_s.real(), r.a_s.imag(), r.m_s.real(),
                             r.m_s.imag(), r.b_s.real(), r.b_s.imag(), std::norm(r.m_s),
                             r.residual};
    try {
      const auto [map, eff] = eliminate(p, r);
      for (double v : {eff.delta, eff.kappa, eff.g_lin, eff.xi.real(), eff.xi.imag(), map.eta})
        row.push_back(v);
      row.push_back(std::string("ok"));
    } catch (const InfeasibleError&) {
      for (int i = 0; i < 6; ++i) row.push_back(kNaN);
      row.push_back(std::string("invalid"));
    }
    t.add(std::move(row));
  }
  CommandResult res;
  res.files.push_back({"steady.csv", to_csv(t)});
  SpecProvenance prov;
  res.meta = base_meta("steady", common, prov);
  res.meta["roots"] = roots.size();
  res.summary = std::to_string(roots.size()) + " steady state(s)";
  return res;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeCli {
  std::optional<std::string> mode;  // KS | HS
  int grid = 41;
  bool surface = false;
  bool hold_bath = false;
  bool unconstrained = false;
  std::optional<std::array<double, 4>> rectangle;  // units of omega_b
};

inline CommandResult run_optimize(PointSpec spec, const SpecProvenance& prov, const OptimizeCli& oc,
                                  const CommonOptions& common) {
  OptimizeOptions o;
  const std::string mode =
      oc.mode.value_or(spec.scheme == Scheme::HS || spec.scheme == Scheme::SS ? "HS" : "KS");
  if (mode == "HS") o.mode = OptimizeMode::HS;
  else if (mode == "KS") o.mode = OptimizeMode::KS;
  else throw ConfigError("--mode: expected KS or HS");
  if (oc.grid < 2) throw ConfigError("--grid must be >= 2");
  o.grid = oc.grid;
  o.keep_surface = oc.surface;
  o.require_heating_null = !oc.unconstrained;
  if (oc.rectangle) {
    auto r = *oc.rectangle;
    for (double& v : r) v *= spec.omega_b;
    if (!(r[1] > r[0] && r[3] > r[2])) throw ConfigError("--rect: expected re0,re1,im0,im1 ascending");
    o.rectangle = r;
  }
  spec.scheme = o.mode == OptimizeMode::HS ? Scheme::HS : Scheme::KS;
  spec.xi_source = XiSource::AutoKS;
  if (oc.hold_bath) {
    if (spec.bath_mode != BathMode::Manual)
      throw ConfigError("--hold-bath needs a manual bath (--r-s / --phi-s)");
    o.hold_bath = SqueezedBathParams::make(spec.r_s, spec.phi_s);
  }
  const OperatingPoint base = resolve(spec);
  o.stability_coupling = base.eff.g_lin;
  const OptimumResult r = optimize_xi(base.eff, o);

  const double wb = base.eff.omega_b;
  Table t{{"mode", "xi_re_over_wb", "xi_im_over_wb", "r_s", "phi_s", "net_rate", "objective",
           "heating_ratio", "feasible", "stability_ok", "paper_claim_rate", "evaluations"},
          {}};
  t.add({mode, r.xi_opt.real() / wb, r.xi_opt.imag() / wb, r.r_s_opt, r.phi_s_opt, r.net_rate_opt,
         r.objective_opt, r.heating_ratio, std::string(r.feasible ? "true" : "false"),
         std::string(r.stability_ok ? "true" : "false"), r.paper_claim_rate,
         static_cast<double>(r.evaluations)});
  CommandResult res;
  res.files.push_back({"optimize.csv", to_csv(t)});
  if (oc.surface) {
    Table s{{"xi_re_over_wb", "xi_im_over_wb", "objective"}, {}};
    std::vector<double> xs, ys, zs;
    for (const auto& p : r.surface) {
      const double z = std::isfinite(p.value) ? p.value : kNaN;
      s.add({p.xi_re / wb, p.xi_im / wb, z});
      xs.push_back(p.xi_re / wb);
      ys.push_back(p.xi_im / wb);
      zs.push_back(z);
    }
    res.files.push_back({"optimize_surface.csv", to_csv(s)});
    if (common.svg)
      res.files.push_back({"optimize_surface.svg",
                           heatmap_svg(xs, ys, zs, {"objective over xi", "Re xi / omega_b",
                                                    "Im xi / omega_b", false, false})});
  }
  res.meta = base_meta("optimize", common, prov);
  res.meta["point"] = describe(base);
  res.meta["mode"] = mode;
  res.meta["gate_coupling"] = base.eff.g_lin;
  res.meta["require_heating_null"] = o.require_heating_null;
  char buf[200];
  std::snprintf(buf, sizeof buf, "xi_opt = %.6f%+.6fi  net = %.10g  r_s = %.6f  feasible = %s",
                r.xi_opt.real() / wb, r.xi_opt.imag() / wb, r.net_rate_opt, r.r_s_opt,
                r.feasible ? "yes" : "no");
  res.summary = buf;
  return res;
}

// ---------------------------------------------------------------------------
// exact

struct ExactCli {
  int dim_cavity = 8, dim_mech = 8;
  bool fock = true;
};

inline CommandResult run_exact(const PointSpec& spec, const SpecProvenance& prov, const ExactCli& ec,
                               const CommonOptions& common) {
  const OperatingPoint op = resolve(spec);
  require_n_th(op, "exact");
  const CoolingReport weak = rates(op.eff, op.bath);
  const Matrix4 a = drift_matrix(op.eff);
  const StabilityVerdict verdict = is_stable(a);
  if (!verdict.stable) throw InfeasibleError("no steady state: drift matrix is unstable");
  const auto st = lyapunov_steady(a, diffusion_matrix(op.eff, op.cavity_bath()));

  Table t{{"quantity", "weak_coupling", "lyapunov", "fock"}, {}};
  std::optional<FockMoments> fm;
  std::optional<DensityMatrix> dm;
  if (ec.fock) {
    const TruncationSpec trunc{ec.dim_cavity, ec.dim_mech};
    validate(trunc);
    dm = steady_density(liouvillian(op.eff, op.cavity_bath(), trunc));
    fm = moments(*dm);
  }
  t.add({std::string("n_b"), weak.n_b, exact_phonon(st), fm ? fm->phonons : kNaN});
  t.add({std::string("n_b_full"), weak.n_b_full, kNaN, kNaN});
  t.add({std::string("n_a"), kNaN, cavity_occupation(st), fm ? fm->photons : kNaN});
  static const char* names[4] = {"x_a", "p_a", "x_b", "p_b"};
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c)
      t.add({std::string("V_") + names[r] + "_" + names[c], kNaN, st.v(r, c),
             fm ? fm->covariance(r, c) : kNaN});
  CommandResult res;
  res.files.push_back({"exact.csv", to_csv(t)});
  res.meta = base_meta("exact", common, prov);
  res.meta["point"] = describe(op);
  res.meta["stability_margin"] = verdict.margin;
  res.meta["physicality_margin"] = physicality_margin(st.v);
  if (dm) {
    res.meta["fock"] = {{"dim_cavity", ec.dim_cavity},
                        {"dim_mech", ec.dim_mech},
                        {"residual", dm->residual},
                        {"min_eigenvalue", dm->min_eigenvalue},
                        {"edge_population", fm->edge_population},
                        {"truncation_ok", fm->edge_population < 1e-6}};
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "n_b weak = %.8g  lyapunov = %.8g  fock = %.8g", weak.n_b,
                exact_phonon(st), fm ? fm->phonons : kNaN);
  res.summary = buf;
  if (fm && fm->edge_population >= 1e-6) {
    std::snprintf(buf, sizeof buf,
                  "\nwarning: edge population %.3g >= 1e-6, the Fock result is not converged; raise --dims",
                  fm->edge_population);
    res.summary += buf;
  }
  return res;
}

// ---------------------------------------------------------------------------
// sweep

inline void apply_axis(PointSpec& s, const std::string& axis, double v) {
  if (axis == "kappa_over_4wb") s.kappa = 4.0 * s.omega_b * v;
  else if (axis == "g_over_wb") s.g_lin = v * s.omega_b;
  else if (axis == "g_over_2pi") {
    if (!s.physical_omega_b)
      throw ConfigError("sweep axis g_over_2pi needs omega_b in physical units (effective.omega_b_hz)");
    s.g_lin = kTwoPi * v;
  } else if (axis == "xi_re" || axis == "xi_im") {
    if (s.scheme != Scheme::KS && s.scheme != Scheme::HS)
      throw ConfigError("sweep axis " + axis + " needs scheme KS or HS");
    const complex x = s.xi_source == XiSource::Value ? s.xi : complex{};
    s.xi = axis == "xi_re" ? complex{v * s.omega_b, x.imag()} : complex{x.real(), v * s.omega_b};
    s.xi_source = XiSource::Value;
  } else if (axis == "delta_over_wb") s.delta = v * s.omega_b;
  else if (axis == "n_th") s.n_th = v;
  else throw ConfigError("unknown sweep axis " + axis);
}

inline CommandResult run_sweep(const PointSpec& spec, const SpecProvenance& prov,
                               const SweepSection& sw, const CommonOptions& common) {
  validate_sweep(sw);
  std::vector<std::string> outputs = sw.outputs.empty() ? std::vector<std::string>{"rates"} : sw.outputs;
  auto has = [&](const char* o) { return std::find(outputs.begin(), outputs.end(), o) != outputs.end(); };
  const auto grid = sweep_points(sw.start, sw.stop, sw.count, sw.spacing);
  if ((has("n_b") || has("n_b_min")) && !spec.n_th && sw.axis != "n_th")
    throw ConfigError("sweep outputs n_b / n_b_min need the mechanical bath occupation: pass --n-th "
                      "or --temperature-k");
  if (has("n_b_min") && (sw.axis == "g_over_wb" || sw.axis == "g_over_2pi"))
    throw ConfigError("sweep output n_b_min minimizes over G and cannot sweep a G axis");

  std::vector<std::string> cols = {sw.axis, "scheme", "xi_re_over_wb", "xi_im_over_wb", "r_s", "phi_s"};
  if (has("rates")) for (const char* c : {"gamma_minus", "gamma_plus", "net_rate", "n_q"}) cols.push_back(c);
  if (has("spectra")) for (const char* c : {"v_plus_wb", "v_minus_wb", "v_sb_plus_wb"}) cols.push_back(c);
  if (has("n_b")) for (const char* c : {"n_b", "n_b_full", "n_b_exact", "stable"}) cols.push_back(c);
  if (has("n_b_min")) for (const char* c : {"n_b_min", "g_opt_over_wb"}) cols.push_back(c);

  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    PointSpec s = spec;
    apply_axis(s, sw.axis, grid[k]);
    if (s.xi_source == XiSource::AutoOpt && !s.gate_coupling) s.gate_coupling = s.g_lin;
    std::vector<Cell> row = {grid[k]};
    OperatingPoint op;
    try {
      op = resolve(s);
    } catch (const InfeasibleError&) {
      row.push_back(std::string("infeasible"));
      while (row.size() < cols.size()) row.push_back(kNaN);
      return row;
    }
    const double wb = op.eff.omega_b;
    row.push_back(std::string(to_string(op.scheme)));
    for (double v : {op.eff.xi.real() / wb, op.eff.xi.imag() / wb, op.bath ? op.bath->r_s() : 0.0,
                     op.bath ? op.bath->phi_s() : 0.0})
      row.push_back(v);
    const CoolingReport r = rates(op.eff, op.bath);
    if (has("rates")) for (double v : {r.gamma_minus, r.gamma_plus, r.net_rate, r.n_q}) row.push_back(v);
    if (has("spectra"))
      for (double v : {r.gamma_minus, r.gamma_plus, v_sb(wb, op.eff).value}) row.push_back(v);
    if (has("n_b")) {
      const ExactPoint e = exact_point(op);
      for (double v : {r.n_b, r.n_b_full, e.n_b}) row.push_back(v);
      row.push_back(std::string(e.stable ? "true" : "false"));
    }
    if (has("n_b_min")) {
      const auto m = minimize_over_coupling(op, 1e-4 * wb, std::max(10.0 * wb, op.eff.kappa));
      row.push_back(m.n_b_min);
      row.push_back(m.g_opt / wb);
    }
    return row;
  });
  Table t{cols, {}};
  for (const auto& r : rows) t.add(r);
  CommandResult res;
  res.files.push_back({"sweep.csv", to_csv(t)});
  res.meta = base_meta("sweep", common, prov);
  res.meta["axis"] = sw.axis;
  res.meta["spacing"] = sw.spacing == Spacing::Log ? "log" : "linear";
  res.meta["count"] = sw.count;
  res.meta["outputs"] = outputs;
  try {
    res.meta["point"] = describe(resolve(spec));
  } catch (const InfeasibleError& e) {
    res.meta["point"] = e.what();
  }
  res.summary = std::to_string(grid.size()) + " points along " + sw.axis;
  return res;
}

}  // namespace kerrcool::cli
