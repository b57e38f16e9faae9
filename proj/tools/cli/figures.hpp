#pragma once

// Figure presets. Everything runs in units of omega_b with the physical scale
// omega_b / 2pi = 10 MHz and gamma_b / 2pi = 10 Hz; G / 2pi in MHz maps to
// G / omega_b = MHz / 10. Rates are per G^2 (G = omega_b) unless a column
// says otherwise.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cli/commands.hpp"

namespace kerrcool::cli {

struct FigureOptions {
  std::optional<double> n_th;
  std::optional<double> temperature_k;
};

namespace figures {

inline constexpr double kOmegaBHz = 1e7;
inline constexpr double kGammaB = 1e-6;
inline constexpr double kKappaPanel = 10.0;  // kappa / 4 omega_b for single-kappa panels
inline constexpr double kXiHsModulus = 13.92;

struct Context {
  std::optional<double> n_th;
  CommonOptions common;
  json fills = json::array();
  std::vector<std::string> gaps;
};

inline std::vector<double> kappa_grid() { return sweep_points(0.01, 100.0, 41, Spacing::Log); }
inline std::vector<double> rate_kappa_grid() { return sweep_points(0.01, 100.0, 81, Spacing::Log); }
inline std::vector<double> g_grid_mhz() { return sweep_points(0.1, 20.0, 61, Spacing::Log); }

inline EffectiveParams base_eff(double kappa_over_4wb, const Context& ctx) {
  EffectiveParams e;
  e.omega_b = 1.0;
  e.kappa = 4.0 * kappa_over_4wb;
  e.delta = optimal_detuning(e.kappa, 1.0);
  e.g_lin = 1.0;
  e.gamma_b = kGammaB;
  e.n_th = ctx.n_th.value_or(0.0);
  return e;
}

inline OperatingPoint point(const EffectiveParams& e, std::optional<SqueezedBathParams> bath,
                            Scheme requested, const Context& ctx) {
  OperatingPoint op;
  op.eff = e;
  op.bath = bath;
  op.n_th_known = ctx.n_th.has_value();
  op.requested = requested;
  op.scheme = classify(e.xi, bath ? bath->r_s() : 0.0);
  return op;
}

inline double hs_scale() {
  Context none;
  return kXiHsModulus / std::abs(xi_ks(base_eff(kKappaPanel, none)));
}

/// The four schemes at one kappa. HS uses the scaled Kerr-null xi with the
/// re-solved bath; nullopt where a bath condition has no solution.
inline std::optional<OperatingPoint> scheme_point(Scheme s, double kappa_over_4wb, const Context& ctx) {
  EffectiveParams e = base_eff(kappa_over_4wb, ctx);
  switch (s) {
    case Scheme::SB:
      return point(e, std::nullopt, s, ctx);
    case Scheme::KS:
      e.xi = xi_ks(e);
      return point(e, std::nullopt, s, ctx);
    case Scheme::SS: {
      const auto c = ss_condition(e);
      if (!c.feasible) return std::nullopt;
      return point(e, c.bath, s, ctx);
    }
    case Scheme::HS: {
      e.xi = hs_scale() * xi_ks(e);
      const auto c = hs_condition(e);
      if (!c.feasible) return std::nullopt;
      return point(e, c.bath, s, ctx);
    }
  }
  return std::nullopt;
}

/// HS with xi from the optimizer, gated on cavity-only stability.
inline std::optional<std::pair<OperatingPoint, OptimumResult>> hs_optimum(double kappa_over_4wb,
                                                                          const Context& ctx) {
  const EffectiveParams e = base_eff(kappa_over_4wb, ctx);
  OptimizeOptions o;
  o.mode = OptimizeMode::HS;
  o.stability_coupling = 0.0;
  try {
    const OptimumResult r = optimize_xi(e, o);
    EffectiveParams at = e;
    at.xi = r.xi_opt;
    const auto bath = SqueezedBathParams::make(r.r_s_opt, r.phi_s_opt);
    return std::make_pair(point(at, bath, Scheme::HS, ctx), r);
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

/// Net rate per G^2, NaN where the cavity alone is past its parametric threshold.
inline double gated_net_rate(const std::optional<OperatingPoint>& op) {
  if (!op) return kNaN;
  EffectiveParams cavity = op->eff;
  cavity.g_lin = 0.0;
  if (!is_stable(drift_matrix(cavity)).stable) return kNaN;
  return rates(op->eff, op->bath).net_rate;
}

inline OperatingPoint at_coupling(OperatingPoint op, double g) {
  op.eff.g_lin = g;
  return op;
}

struct Output {
  std::vector<std::pair<std::string, Table>> tables;  // file stem -> table
  std::vector<std::pair<std::string, std::string>> svgs;
  json extra = json::object();
};

inline Series series_of(const Table& t, const std::string& x, const std::string& y,
                        const std::string& label = "") {
  return {label.empty() ? y : label, t.numeric(x), t.numeric(y)};
}

inline std::string svg_lines(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                             PlotSpec spec) {
  std::vector<Series> s;
  for (const auto& y : ys) s.push_back(series_of(t, x, y));
  return line_plot_svg(s, spec);
}

// ---------------------------------------------------------------------------

inline Table spectra_table(Scheme a, Scheme b, const Context& ctx) {
  const auto pa = scheme_point(a, kKappaPanel, ctx), pb = scheme_point(b, kKappaPanel, ctx);
  const std::string ca = "v_" + std::string(to_string(a)), cb = "v_" + std::string(to_string(b));
  std::string la = ca, lb = cb;
  for (auto* s : {&la, &lb})
    for (auto& ch : *s) ch = static_cast<char>(std::tolower(ch));
  Table t{{"omega_over_wb", la, lb}, {}};
  for (double w : sweep_points(-3.0, 3.0, 601, Spacing::Linear)) {
    t.add({w, pa ? spectrum(w, pa->eff, pa->bath).value : kNaN,
           pb ? spectrum(w, pb->eff, pb->bath).value : kNaN});
  }
  return t;
}

inline Output fig2a(Context& ctx) {
  Output o;
  o.tables.push_back({"fig2a", spectra_table(Scheme::SB, Scheme::KS, ctx)});
  o.svgs.push_back({"fig2a", svg_lines(o.tables[0].second, "omega_over_wb", {"v_sb", "v_ks"},
                                        {"SB vs KS spectra, kappa/4wb = 10", "omega / omega_b",
                                         "V / G^2", false, false})});
  ctx.fills.push_back("spectra normalized by G^2 on omega / omega_b in [-3, 3], 601 points");
  return o;
}

inline Output fig2b(Context& ctx) {
  const auto grid = rate_kappa_grid();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    const double sb = gated_net_rate(scheme_point(Scheme::SB, grid[k], ctx));
    const double ks = gated_net_rate(scheme_point(Scheme::KS, grid[k], ctx));
    return std::vector<Cell>{grid[k], sb, ks, ks / sb};
  });
  Table t{{"kappa_over_4wb", "net_rate_SB", "net_rate_KS_opt", "ratio"}, {}};
  for (const auto& r : rows) t.add(r);
  Output o;
  o.tables.push_back({"fig2b", t});
  o.svgs.push_back({"fig2b", svg_lines(t, "kappa_over_4wb", {"net_rate_SB", "net_rate_KS_opt"},
                                        {"net cooling rate per G^2", "kappa / 4 omega_b",
                                         "Gamma / G^2", true, true})});
  o.extra["ratio_at_kappa_over_4wb_100"] = std::get<double>(t.rows.back()[3]);
  ctx.fills.push_back("kappa / 4 omega_b log grid 0.01..100, 81 points");
  return o;
}

inline Table coupling_table(const std::vector<Scheme>& schemes, double kappa_over_4wb,
                            std::function<std::optional<OperatingPoint>(Scheme)> make) {
  std::vector<std::string> cols = {"g_over_2pi_mhz", "g_over_wb"};
  for (Scheme s : schemes) {
    const std::string n(to_string(s));
    cols.push_back("n_b_" + n);
    cols.push_back("n_b_exact_" + n);
  }
  std::vector<std::optional<OperatingPoint>> ops;
  for (Scheme s : schemes) ops.push_back(make(s));
  const auto grid = g_grid_mhz();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    const double g = grid[k] / 10.0;
    std::vector<Cell> row = {grid[k], g};
    for (const auto& op : ops) {
      if (!op) {
        row.push_back(kNaN);
        row.push_back(kNaN);
        continue;
      }
      const OperatingPoint at = at_coupling(*op, g);
      const ExactPoint e = exact_point(at);
      row.push_back(e.stable ? rates(at.eff, at.bath).n_b : kNaN);
      row.push_back(e.n_b);
    }
    return row;
  });
  (void)kappa_over_4wb;
  Table t{cols, {}};
  for (const auto& r : rows) t.add(r);
  return t;
}

inline Table minimum_table(const std::vector<std::string>& labels,
                           std::function<std::optional<OperatingPoint>(std::size_t, double)> make) {
  std::vector<std::string> cols = {"kappa_over_4wb"};
  for (const auto& l : labels) {
    cols.push_back("n_b_min_" + l);
    cols.push_back("g_opt_over_wb_" + l);
    cols.push_back("g_opt_over_2pi_mhz_" + l);
  }
  const auto grid = kappa_grid();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    std::vector<Cell> row = {grid[k]};
    for (std::size_t s = 0; s < labels.size(); ++s) {
      const auto op = make(s, grid[k]);
      CouplingMinimum m;
      if (op) m = minimize_over_coupling(*op, 1e-4, std::max(10.0, op->eff.kappa));
      row.push_back(m.n_b_min);
      row.push_back(m.g_opt);
      row.push_back(10.0 * m.g_opt);
    }
    return row;
  });
  Table t{cols, {}};
  for (const auto& r : rows) t.add(r);
  return t;
}

inline Output fig2c(Context& ctx) {
  Output o;
  const Table t = coupling_table({Scheme::SB, Scheme::KS}, kKappaPanel,
                                 [&](Scheme s) { return scheme_point(s, kKappaPanel, ctx); });
  o.tables.push_back({"fig2c", t});
  o.svgs.push_back({"fig2c", svg_lines(t, "g_over_2pi_mhz", {"n_b_SB", "n_b_KS"},
                                        {"phonon number, kappa/4wb = 10", "G / 2pi (MHz)", "n_b",
                                         true, true})});
  ctx.fills.push_back("G / 2pi log grid 0.1..20 MHz, 61 points");
  ctx.fills.push_back("n_b is the weak-coupling form; n_b_exact is the Lyapunov value (NaN if unstable)");
  return o;
}

inline Output fig2d(Context& ctx) {
  Output o;
  const Table t = minimum_table({"SB", "KS"}, [&](std::size_t s, double k) {
    return scheme_point(s == 0 ? Scheme::SB : Scheme::KS, k, ctx);
  });
  o.tables.push_back({"fig2d", t});
  o.svgs.push_back({"fig2d", svg_lines(t, "kappa_over_4wb", {"n_b_min_SB", "n_b_min_KS"},
                                        {"minimum phonon number", "kappa / 4 omega_b", "n_b min",
                                         true, true})});
  ctx.fills.push_back("n_b_min minimizes the exact Lyapunov phonon number over stable G in [1e-4, max(10, kappa)] omega_b");
  ctx.fills.push_back("kappa / 4 omega_b log grid 0.01..100, 41 points");
  return o;
}

inline void hs_fill(Context& ctx) {
  ctx.fills.push_back("HS uses xi = rho * xi_KS(kappa) with rho = 13.92 / |xi_KS(kappa/4wb = 10)| = " +
                      format_number(hs_scale()) + ", bath re-solved from the heating null");
}

inline Output fig3a(Context& ctx) {
  Output o;
  o.tables.push_back({"fig3a", spectra_table(Scheme::SS, Scheme::HS, ctx)});
  o.svgs.push_back({"fig3a", svg_lines(o.tables[0].second, "omega_over_wb", {"v_ss", "v_hs"},
                                        {"SS vs HS spectra, kappa/4wb = 10", "omega / omega_b",
                                         "V / G^2", false, false})});
  hs_fill(ctx);
  ctx.fills.push_back("spectra normalized by G^2 on omega / omega_b in [-3, 3], 601 points");
  return o;
}

inline Output fig3b(Context& ctx) {
  const auto grid = rate_kappa_grid();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    const auto ss = scheme_point(Scheme::SS, grid[k], ctx);
    const auto hs = scheme_point(Scheme::HS, grid[k], ctx);
    return std::vector<Cell>{grid[k], gated_net_rate(ss), gated_net_rate(hs),
                             ss ? ss->bath->r_s() : kNaN, hs ? hs->bath->r_s() : kNaN};
  });
  Table t{{"kappa_over_4wb", "net_rate_SS", "net_rate_HS", "r_s_SS", "r_s_HS"}, {}};
  for (const auto& r : rows) t.add(r);
  Output o;
  o.tables.push_back({"fig3b", t});
  o.svgs.push_back({"fig3b", svg_lines(t, "kappa_over_4wb", {"net_rate_SS", "net_rate_HS"},
                                        {"net cooling rate per G^2", "kappa / 4 omega_b",
                                         "Gamma / G^2", true, true})});
  hs_fill(ctx);
  ctx.fills.push_back("kappa / 4 omega_b log grid 0.01..100, 81 points");
  return o;
}

inline Output fig3c(Context& ctx) {
  Output o;
  const Table t = coupling_table({Scheme::SS, Scheme::HS}, kKappaPanel,
                                 [&](Scheme s) { return scheme_point(s, kKappaPanel, ctx); });
  o.tables.push_back({"fig3c", t});
  o.svgs.push_back({"fig3c", svg_lines(t, "g_over_2pi_mhz", {"n_b_SS", "n_b_HS"},
                                        {"phonon number, kappa/4wb = 10", "G / 2pi (MHz)", "n_b",
                                         true, true})});
  // Inset: kappa dependence at G / 2pi = 6 MHz.
  const auto grid = kappa_grid();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    std::vector<Cell> row = {grid[k]};
    for (Scheme s : {Scheme::SS, Scheme::HS}) {
      const auto op = scheme_point(s, grid[k], ctx);
      if (!op) {
        row.push_back(kNaN);
        row.push_back(kNaN);
        continue;
      }
      const OperatingPoint at = at_coupling(*op, 0.6);
      const ExactPoint e = exact_point(at);
      row.push_back(e.stable ? rates(at.eff, at.bath).n_b : kNaN);
      row.push_back(e.n_b);
    }
    return row;
  });
  Table inset{{"kappa_over_4wb", "n_b_SS", "n_b_exact_SS", "n_b_HS", "n_b_exact_HS"}, {}};
  for (const auto& r : rows) inset.add(r);
  o.tables.push_back({"fig3c_inset", inset});
  hs_fill(ctx);
  ctx.fills.push_back("G / 2pi log grid 0.1..20 MHz, 61 points; inset kappa grid 0.01..100, 41 points");
  return o;
}

inline Output fig3d(Context& ctx) {
  Output o;
  const Table t = minimum_table({"SS", "HS"}, [&](std::size_t s, double k) {
    return scheme_point(s == 0 ? Scheme::SS : Scheme::HS, k, ctx);
  });
  o.tables.push_back({"fig3d", t});
  o.svgs.push_back({"fig3d", svg_lines(t, "kappa_over_4wb", {"n_b_min_SS", "n_b_min_HS"},
                                        {"minimum phonon number", "kappa / 4 omega_b", "n_b min",
                                         true, true})});
  hs_fill(ctx);
  ctx.fills.push_back("n_b_min minimizes the exact Lyapunov phonon number over stable G in [1e-4, max(10, kappa)] omega_b");
  return o;
}

inline Output fig4a(Context& ctx) {
  const double k4 = 0.1;
  const EffectiveParams e = base_eff(k4, ctx);
  OptimizeOptions opt;
  opt.mode = OptimizeMode::HS;
  opt.stability_coupling = 0.0;
  const OptimumResult best = optimize_xi(e, opt);
  opt.rectangle = std::array<double, 4>{-1.0, 1.0, -1.0, 1.0};
  opt.grid = 81;
  opt.keep_surface = true;
  opt.polish_seeds = 0;
  const OptimumResult surf = optimize_xi(e, opt);

  Table t{{"xi_re_over_wb", "xi_im_over_wb", "net_rate", "net_rate_normalized"}, {}};
  std::vector<double> xs, ys, zs;
  for (const auto& p : surf.surface) {
    const double z = std::isfinite(p.value) ? p.value : kNaN;
    t.add({p.xi_re, p.xi_im, z, z * k4});
    xs.push_back(p.xi_re);
    ys.push_back(p.xi_im);
    zs.push_back(z * k4);
  }
  Output o;
  o.tables.push_back({"fig4a", t});
  o.svgs.push_back({"fig4a", heatmap_svg(xs, ys, zs, {"HS net rate x kappa / 4G^2, kappa/4wb = 0.1",
                                                      "Re xi / omega_b", "Im xi / omega_b", false,
                                                      false})});
  o.extra["xi_opt_re"] = best.xi_opt.real();
  o.extra["xi_opt_im"] = best.xi_opt.imag();
  o.extra["net_rate_opt"] = best.net_rate_opt;
  o.extra["net_rate_opt_normalized"] = best.net_rate_opt * k4;
  o.extra["r_s_opt"] = best.r_s_opt;
  ctx.fills.push_back("surface on Re xi, Im xi in [-1, 1] omega_b, 81 x 81; grey cells have no heating-null bath or are past the cavity threshold");
  return o;
}

inline Output fig4b(Context& ctx) {
  const auto grid = kappa_grid();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    const double unopt = gated_net_rate(scheme_point(Scheme::HS, grid[k], ctx));
    const auto best = hs_optimum(grid[k], ctx);
    const double opt = best ? gated_net_rate(best->first) : kNaN;
    return std::vector<Cell>{grid[k], unopt, opt, best ? best->second.xi_opt.real() : kNaN,
                             best ? best->second.xi_opt.imag() : kNaN,
                             best ? best->second.r_s_opt : kNaN, opt / unopt};
  });
  Table t{{"kappa_over_4wb", "net_rate_HS_unopt", "net_rate_HS_opt", "xi_opt_re_over_wb",
           "xi_opt_im_over_wb", "r_s_opt", "ratio"},
          {}};
  for (const auto& r : rows) t.add(r);
  Output o;
  o.tables.push_back({"fig4b", t});
  o.svgs.push_back({"fig4b", svg_lines(t, "kappa_over_4wb", {"net_rate_HS_unopt", "net_rate_HS_opt"},
                                        {"HS net rate per G^2", "kappa / 4 omega_b", "Gamma / G^2",
                                         true, true})});
  hs_fill(ctx);
  ctx.fills.push_back("optimized xi maximizes the net rate under the heating null with cavity-only stability");
  return o;
}

inline Output fig4c(Context& ctx) {
  const auto grid = kappa_grid();
  const auto rows = parallel_map(grid.size(), [&](std::size_t k) {
    const auto best = hs_optimum(grid[k], ctx);
    const double hs = best ? gated_net_rate(best->first) : kNaN;
    const double ss = gated_net_rate(scheme_point(Scheme::SS, grid[k], ctx));
    const double ks = gated_net_rate(scheme_point(Scheme::KS, grid[k], ctx));
    const double sb = gated_net_rate(scheme_point(Scheme::SB, grid[k], ctx));
    std::vector<Cell> row = {grid[k], hs, ss, ks, sb};
    for (double v : {hs, ss, ks, sb}) row.push_back(v * grid[k]);
    return row;
  });
  Table t{{"kappa_over_4wb", "net_rate_HS_opt", "net_rate_SS", "net_rate_KS", "net_rate_SB",
           "normalized_HS_opt", "normalized_SS", "normalized_KS", "normalized_SB"},
          {}};
  for (const auto& r : rows) t.add(r);
  Output o;
  o.tables.push_back({"fig4c", t});
  o.svgs.push_back({"fig4c", svg_lines(t, "kappa_over_4wb",
                                        {"normalized_HS_opt", "normalized_SS", "normalized_KS",
                                         "normalized_SB"},
                                        {"net rate x kappa / 4G^2", "kappa / 4 omega_b",
                                         "Gamma kappa / 4G^2", true, true})});
  ctx.fills.push_back("normalized columns are the net rate times kappa / (4 G^2)");
  return o;
}

inline Output fig4d(Context& ctx) {
  Output o;
  const auto best = hs_optimum(kKappaPanel, ctx);
  const Table t = coupling_table({Scheme::HS, Scheme::HS}, kKappaPanel, [&, first = true](Scheme) mutable {
    const bool unopt = first;
    first = false;
    if (unopt) return scheme_point(Scheme::HS, kKappaPanel, ctx);
    return best ? std::optional<OperatingPoint>(best->first) : std::nullopt;
  });
  Table renamed = t;
  renamed.columns = {"g_over_2pi_mhz", "g_over_wb", "n_b_HS_unopt", "n_b_exact_HS_unopt",
                     "n_b_HS_opt", "n_b_exact_HS_opt"};
  o.tables.push_back({"fig4d", renamed});
  o.svgs.push_back({"fig4d", svg_lines(renamed, "g_over_2pi_mhz", {"n_b_HS_unopt", "n_b_HS_opt"},
                                        {"HS phonon number, kappa/4wb = 10", "G / 2pi (MHz)", "n_b",
                                         true, true})});
  if (best) {
    o.extra["xi_opt_re"] = best->second.xi_opt.real();
    o.extra["xi_opt_im"] = best->second.xi_opt.imag();
  }
  hs_fill(ctx);
  ctx.fills.push_back("optimized xi is found once with cavity-only stability and then held as G varies");
  return o;
}

struct Preset {
  Output (*run)(Context&);
  bool needs_n_th;
  const char* title;
};

inline const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> p = {
      {"fig2a", {fig2a, false, "SB and KS noise spectra"}},
      {"fig2b", {fig2b, false, "SB and KS net cooling rates vs kappa"}},
      {"fig2c", {fig2c, true, "SB and KS phonon number vs G"}},
      {"fig2d", {fig2d, true, "SB and KS minimum phonon number vs kappa"}},
      {"fig3a", {fig3a, false, "SS and HS noise spectra"}},
      {"fig3b", {fig3b, false, "SS and HS net cooling rates vs kappa"}},
      {"fig3c", {fig3c, true, "SS and HS phonon number vs G"}},
      {"fig3d", {fig3d, true, "SS and HS minimum phonon number vs kappa"}},
      {"fig4a", {fig4a, false, "HS net rate over complex xi"}},
      {"fig4b", {fig4b, false, "HS net rate, unoptimized vs optimized xi"}},
      {"fig4c", {fig4c, false, "optimized HS against SS, KS, SB"}},
      {"fig4d", {fig4d, true, "HS phonon number, unoptimized vs optimized xi"}},
  };
  return p;
}

}  // namespace figures

inline CommandResult run_figure(const std::string& name, const FigureOptions& fo,
                                const CommonOptions& common) {
  const auto& all = figures::presets();
  const auto it = all.find(name);
  if (it == all.end()) throw ConfigError("unknown figure " + name);
  figures::Context ctx;
  ctx.common = common;
  if (fo.n_th && fo.temperature_k) throw ConfigError("give --n-th or --temperature-k, not both");
  ctx.n_th = fo.n_th;
  if (fo.temperature_k)
    ctx.n_th = n_th_from_temperature(*fo.temperature_k, kTwoPi * figures::kOmegaBHz);
  if (ctx.n_th) kerrcool::detail::require_non_negative("n_th", *ctx.n_th);
  if (it->second.needs_n_th && !ctx.n_th)
    throw ConfigError(name + " needs the mechanical bath occupation n_th, which the source does not "
                             "state: pass --n-th or --temperature-k");
  if (!ctx.n_th) ctx.gaps.push_back("n_th not supplied: not needed for this figure");

  const figures::Output out = it->second.run(ctx);
  CommandResult res;
  for (const auto& [stem, table] : out.tables) res.files.push_back({stem + ".csv", to_csv(table)});
  if (common.svg)
    for (const auto& [stem, svg] : out.svgs) res.files.push_back({stem + ".svg", svg});
  SpecProvenance prov;
  res.meta = base_meta("figure", common, prov);
  res.meta["figure"] = name;
  res.meta["title"] = it->second.title;
  res.meta["scale"] = {{"omega_b_over_2pi_hz", figures::kOmegaBHz},
                       {"gamma_b_over_wb", figures::kGammaB},
                       {"detuning", "optimal sqrt(kappa^2/4 + omega_b^2)"},
                       {"rates", "per G^2 at G = omega_b"}};
  res.meta["n_th"] = ctx.n_th ? json(*ctx.n_th) : json(nullptr);
  res.meta["implementer_fills"] = ctx.fills;
  res.meta["gaps"] = ctx.gaps;
  res.meta["results"] = json::object();
  for (auto it2 = out.extra.begin(); it2 != out.extra.end(); ++it2)
    res.meta["results"][it2.key()] =
        it2->is_number() ? number_or_text(it2->get<double>()) : *it2;
  res.summary = name + ": " + it->second.title;
  for (auto it2 = out.extra.begin(); it2 != out.extra.end(); ++it2)
    if (it2->is_number()) res.summary += "\n  " + it2.key() + " = " + format_number(it2->get<double>());
  return res;
}

}  // namespace kerrcool::cli
