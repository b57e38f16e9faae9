#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/figures.hpp"
#include "cli/operating_point.hpp"

namespace kc = kerrcool::cli;

namespace {

enum Exit { kOk = 0, kConfig = 2, kInfeasible = 3, kNumerical = 4 };

void add_point_flags(CLI::App* sub, kc::Overrides& ov) {
  sub->add_option("--scheme", ov.scheme, "SB, KS, SS or HS");
  sub->add_option("--kappa-over-4wb", ov.kappa_over_4wb, "kappa / (4 omega_b)");
  sub->add_option("--detuning", ov.detuning, "\"opt\" or Delta / omega_b");
  sub->add_option("--g-over-wb", ov.g_over_wb, "linearized coupling G / omega_b");
  sub->add_option("--xi", ov.xi, "auto-ks, auto-opt, or re,im in units of omega_b");
  sub->add_option("--n-th", ov.n_th, "mechanical bath occupation");
  sub->add_option("--temperature-k", ov.temperature_k,
                  "bath temperature in kelvin (needs a physical omega_b)");
  sub->add_option("--gamma-b-over-wb", ov.gamma_b_over_wb, "mechanical damping gamma_b / omega_b");
  sub->add_option("--bath", ov.bath, "auto, none or manual");
  sub->add_option("--r-s", ov.r_s, "squeezing strength (manual bath)");
  sub->add_option("--phi-s", ov.phi_s, "squeezing phase (manual bath)");
  sub->add_option("--n-a", ov.n_a, "thermal cavity occupation when unsqueezed");
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw kc::ConfigError(std::string(flag) + ": expected comma-separated numbers");
    }
  }
  if (out.size() != expected)
    throw kc::ConfigError(std::string(flag) + ": expected " + std::to_string(expected) + " numbers");
  return out;
}

void write_result(const kc::CommandResult& res, const std::filesystem::path& dir,
                  const std::string& stem) {
  for (const auto& f : res.files) kc::write_text(dir / f.name, f.text);
  kc::write_text(dir / (stem + "_meta.json"), res.meta.dump(2) + "\n");
  std::cout << res.summary << "\n";
  for (const auto& f : res.files) std::cout << "wrote " << (dir / f.name).string() << "\n";
  std::cout << "wrote " << (dir / (stem + "_meta.json")).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-magnon and squeezed-vacuum optomechanical cooling"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool svg = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "recorded in metadata");
  app.add_flag("--svg", svg, "also write SVG plots");

  kc::Overrides ov;
  kc::SpectrumOptions so;
  auto* spectrum = app.add_subcommand("spectrum", "noise spectrum V(omega)");
  add_point_flags(spectrum, ov);
  spectrum->add_option("--omega-min", so.omega_min, "in units of omega_b")->capture_default_str();
  spectrum->add_option("--omega-max", so.omega_max, "in units of omega_b")->capture_default_str();
  spectrum->add_option("--points", so.points)->capture_default_str();

  auto* rates = app.add_subcommand("rates", "cooling/heating rates and phonon-number limits");
  add_point_flags(rates, ov);

  auto* steady = app.add_subcommand("steady", "steady states of the full model (config model section)");

  kc::OptimizeCli oc;
  std::string rect;
  auto* optimize = app.add_subcommand("optimize", "search xi for the best net cooling rate");
  add_point_flags(optimize, ov);
  optimize->add_option("--mode", oc.mode, "KS (heating null) or HS (net rate)");
  optimize->add_option("--grid", oc.grid, "grid points per axis")->capture_default_str();
  optimize->add_option("--rect", rect, "re0,re1,im0,im1 in units of omega_b");
  optimize->add_flag("--surface", oc.surface, "write the grid objective");
  optimize->add_flag("--hold-bath", oc.hold_bath, "keep the manual bath fixed while xi moves");
  optimize->add_flag("--unconstrained", oc.unconstrained, "KS: maximize net rate without the null");

  kc::ExactCli ec;
  std::string dims = "8x8";
  bool no_fock = false;
  auto* exact = app.add_subcommand("exact", "weak-coupling vs Lyapunov vs truncated Fock");
  add_point_flags(exact, ov);
  exact->add_option("--dims", dims, "cavity x mechanics truncation")->capture_default_str();
  exact->add_flag("--no-fock", no_fock, "skip the Fock-space solve");

  kc::SweepSection sw;
  std::string spacing, outputs;
  auto* sweep = app.add_subcommand("sweep", "one-parameter sweep");
  add_point_flags(sweep, ov);
  auto* axis_opt = sweep->add_option("--axis", sw.axis);
  auto* start_opt = sweep->add_option("--start", sw.start);
  auto* stop_opt = sweep->add_option("--stop", sw.stop);
  auto* count_opt = sweep->add_option("--count", sw.count);
  sweep->add_option("--spacing", spacing, "linear or log");
  sweep->add_option("--outputs", outputs, "comma list of rates, n_b, n_b_min, spectra");

  std::string figure_name;
  kc::FigureOptions fo;
  auto* figure = app.add_subcommand("figure", "regenerate a figure preset (fig2a .. fig4d)");
  figure->add_option("name", figure_name)->required();
  figure->add_option("--n-th", fo.n_th, "mechanical bath occupation");
  figure->add_option("--temperature-k", fo.temperature_k, "bath temperature (omega_b / 2pi = 10 MHz)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    kc::RunConfig cfg;
    if (!config_path.empty()) cfg = kc::load_config(config_path);
    kc::CommonOptions common;
    common.seed = seed.value_or(cfg.seed);
    common.svg = svg;
    const std::filesystem::path dir(out_dir);

    if (figure->parsed()) {
      write_result(kc::run_figure(figure_name, fo, common), dir, figure_name);
      return kOk;
    }
    if (steady->parsed()) {
      write_result(kc::run_steady(cfg, common), dir, "steady");
      return kOk;
    }

    kc::SpecProvenance prov;
    const kc::PointSpec spec = kc::build_spec(cfg, ov, prov);
    if (spectrum->parsed()) {
      write_result(kc::run_spectrum(spec, prov, so, common), dir, "spectrum");
    } else if (rates->parsed()) {
      write_result(kc::run_rates(spec, prov, common), dir, "rates");
    } else if (optimize->parsed()) {
      if (!rect.empty()) {
        const auto r = parse_list(rect, 4, "--rect");
        oc.rectangle = std::array<double, 4>{r[0], r[1], r[2], r[3]};
      }
      write_result(kc::run_optimize(spec, prov, oc, common), dir, "optimize");
    } else if (exact->parsed()) {
      const auto x = dims.find('x');
      try {
        if (x == std::string::npos) throw std::invalid_argument("dims");
        ec.dim_cavity = std::stoi(dims.substr(0, x));
        ec.dim_mech = std::stoi(dims.substr(x + 1));
      } catch (const std::exception&) {
        throw kc::ConfigError("--dims: expected CxM, e.g. 8x8");
      }
      ec.fock = !no_fock;
      write_result(kc::run_exact(spec, prov, ec, common), dir, "exact");
    } else if (sweep->parsed()) {
      kc::SweepSection s = cfg.sweep.value_or(kc::SweepSection{});
      if (axis_opt->count()) s.axis = sw.axis;
      if (start_opt->count()) s.start = sw.start;
      if (stop_opt->count()) s.stop = sw.stop;
      if (count_opt->count()) s.count = sw.count;
      if (!spacing.empty()) {
        if (spacing == "log") s.spacing = kc::Spacing::Log;
        else if (spacing == "linear") s.spacing = kc::Spacing::Linear;
        else throw kc::ConfigError("--spacing: expected linear or log");
      }
      if (!outputs.empty()) {
        s.outputs.clear();
        std::stringstream ss(outputs);
        std::string item;
        while (std::getline(ss, item, ',')) s.outputs.push_back(item);
      }
      if (s.axis.empty()) throw kc::ConfigError("sweep needs an axis (--axis or sweep.axis)");
      write_result(kc::run_sweep(spec, prov, s, common), dir, "sweep");
    }
    return kOk;
  } catch (const kc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const kerrcool::ValidationError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kConfig;
  } catch (const kerrcool::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const kerrcool::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
}
