#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/figures.hpp"
#include "cli/operating_point.hpp"
#include "cli/output.hpp"

using namespace kerrcool;
using namespace kerrcool::cli;

namespace {

RunConfig parse(const char* text) { return parse_config(json::parse(text)); }

std::string config_error(const char* text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

PointSpec spec_from(const char* text, Overrides ov = {}) {
  SpecProvenance prov;
  return build_spec(parse(text), ov, prov);
}

}  // namespace

TEST(Config, UnknownKeysAreNamed) {
  EXPECT_NE(config_error(R"({"colour": 1})").find("colour"), std::string::npos);
  EXPECT_NE(config_error(R"({"effective": {"kappa_over_4wb": 1, "kapa_rad": 2}})").find("kapa_rad"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"bath": {"r_s": 0.1, "phase": 0}})").find("bath.phase"),
            std::string::npos);
}

TEST(Config, FrequenciesNeedUnits) {
  EXPECT_NE(config_error(R"({"effective": {"kappa": 4}})").find("unit suffix"), std::string::npos);
  EXPECT_NE(config_error(R"({"effective": {"kappa_rad": 4, "kappa_over_wb": 4}})").find("more than one"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"effective": {"kappa_rad": 4, "kappa_over_4wb": 1}})").find("both"),
            std::string::npos);
}

TEST(Config, HzConvertsToAngular) {
  const RunConfig c = parse(R"({"effective": {"omega_b_hz": 1e7, "kappa_over_wb": 40,
                                               "gamma_b_hz": 10, "delta": "opt"}})");
  ASSERT_TRUE(c.effective.omega_b);
  EXPECT_DOUBLE_EQ(*c.effective.omega_b, kTwoPi * 1e7);
  EXPECT_DOUBLE_EQ(*c.effective.kappa, 40.0 * kTwoPi * 1e7);
  EXPECT_DOUBLE_EQ(*c.effective.gamma_b, kTwoPi * 10.0);
  EXPECT_TRUE(c.effective.optimal_detuning);
}

TEST(Config, ModelRequiresThermalOccupation) {
  const char* text = R"({"model": {"omega_b_hz": 1e7, "delta_a_over_wb": 1, "delta_m_over_wb": 10,
      "g0_hz": 100, "kerr_hz": 1e-3, "j_coupling_over_wb": 1, "drive_amp_over_wb": 10,
      "kappa_a_over_wb": 1, "kappa_m_over_wb": 1, "gamma_b_hz": 10}})";
  EXPECT_NE(config_error(text).find("n_th"), std::string::npos);
}

TEST(Config, ModelAbsoluteFrequenciesAndDetuningsExclusive) {
  const char* text = R"({"model": {"omega_b_hz": 1e7, "delta_a_over_wb": 1, "delta_m_over_wb": 10,
      "omega_a_hz": 1e10, "omega_m_hz": 1e10, "omega_d_hz": 1e10,
      "g0_hz": 100, "kerr_hz": 1e-3, "j_coupling_over_wb": 1, "drive_amp_over_wb": 10,
      "kappa_a_over_wb": 1, "kappa_m_over_wb": 1, "gamma_b_hz": 10, "n_th": 100}})";
  EXPECT_NE(config_error(text).find("not both"), std::string::npos);
}

TEST(Config, SweepValidation) {
  SweepSection s;
  s.axis = "kappa_over_4wb";
  s.start = 0.1;
  s.stop = 10.0;
  s.count = 5;
  s.spacing = Spacing::Log;
  EXPECT_NO_THROW(validate_sweep(s));
  s.count = 1;
  EXPECT_THROW(validate_sweep(s), ConfigError);
  s.count = 5;
  s.start = -1.0;
  EXPECT_THROW(validate_sweep(s), ConfigError);
  s.start = 0.1;
  s.axis = "temperature";
  EXPECT_THROW(validate_sweep(s), ConfigError);
  s.axis = "n_th";
  s.outputs = {"rates", "phonons"};
  EXPECT_THROW(validate_sweep(s), ConfigError);
}

TEST(Config, SweepEndpointsExact) {
  const auto x = sweep_points(0.01, 100.0, 81, Spacing::Log);
  EXPECT_EQ(x.front(), 0.01);
  EXPECT_EQ(x.back(), 100.0);
  EXPECT_NEAR(x[40], 1.0, 1e-12);
  const auto y = sweep_points(-3.0, 3.0, 601, Spacing::Linear);
  EXPECT_EQ(y.back(), 3.0);
  EXPECT_NEAR(y[200], -1.0, 1e-14);
}

TEST(Output, CsvFormatting) {
  Table t{{"a", "b", "c"}, {}};
  t.add({0.1, std::nan(""), std::string("SB")});
  t.add({-INFINITY, 1e-300, std::string("x")});
  EXPECT_EQ(to_csv(t), "a,b,c\n0.10000000000000001,nan,SB\n-inf,1e-300,x\n");
  EXPECT_THROW(t.add({1.0}), std::logic_error);
  EXPECT_TRUE(std::isnan(t.numeric("c")[0]));
}

TEST(Output, SvgIsWellFormedAndSkipsNonFinite) {
  const std::string svg = line_plot_svg({{"s<1>", {1, 2, 3}, {1, std::nan(""), 3}}},
                                        {"t", "x", "y", true, true});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("s&lt;1&gt;"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(OperatingPoint, SidebandOptimalDetuning) {
  Overrides ov;
  ov.scheme = "SB";
  ov.kappa_over_4wb = 10.0;
  ov.detuning = "opt";
  SpecProvenance prov;
  const OperatingPoint op = resolve(build_spec({}, ov, prov));
  EXPECT_NEAR(op.eff.delta, std::sqrt(401.0), 1e-12);
  EXPECT_FALSE(op.n_th_known);
  EXPECT_NEAR(rates(op.eff).n_q, (std::sqrt(401.0) - 1.0) / 2.0, 1e-12);
  ASSERT_EQ(prov.gaps.size(), 1u);
  EXPECT_NE(prov.gaps[0].find("n_th"), std::string::npos);
}

TEST(OperatingPoint, HybridAutoKsReSolvesBath) {
  Overrides ov;
  ov.scheme = "HS";
  ov.kappa_over_4wb = 10.0;
  ov.detuning = "opt";
  ov.xi = "auto-ks";
  SpecProvenance prov;
  const OperatingPoint op = resolve(build_spec({}, ov, prov));
  EXPECT_EQ(op.eff.xi, xi_ks(op.eff));
  ASSERT_TRUE(op.bath);
  EXPECT_NEAR(op.bath->r_s(), 0.0, 1e-12);  // reflection identity: the null needs no squeezing
  EXPECT_EQ(op.scheme, Scheme::KS);
  EXPECT_EQ(op.requested, Scheme::HS);
}

TEST(OperatingPoint, SchemeConflictsAreConfigErrors) {
  Overrides ov;
  ov.scheme = "SB";
  ov.kappa_over_4wb = 1.0;
  ov.detuning = "opt";
  ov.xi = "0.1,0.2";
  SpecProvenance prov;
  EXPECT_THROW(resolve(build_spec({}, ov, prov)), ConfigError);
  ov.xi.reset();
  ov.r_s = 0.3;
  EXPECT_THROW(resolve(build_spec({}, ov, prov)), ConfigError);
}

TEST(OperatingPoint, MissingKappaOrDetuning) {
  Overrides ov;
  ov.detuning = "opt";
  SpecProvenance prov;
  EXPECT_THROW(build_spec({}, ov, prov), ConfigError);
  ov.kappa_over_4wb = 1.0;
  ov.detuning.reset();
  EXPECT_THROW(build_spec({}, ov, prov), ConfigError);
}

TEST(OperatingPoint, TemperatureNeedsPhysicalScale) {
  Overrides ov;
  ov.kappa_over_4wb = 1.0;
  ov.detuning = "opt";
  ov.temperature_k = 0.01;
  SpecProvenance prov;
  EXPECT_THROW(build_spec({}, ov, prov), ConfigError);
  const PointSpec s = spec_from(R"({"effective": {"omega_b_hz": 1e7, "kappa_over_4wb": 1, "delta": "opt"}})", ov);
  ASSERT_TRUE(s.n_th);
  EXPECT_NEAR(*s.n_th, n_th_from_temperature(0.01, kTwoPi * 1e7), 1e-12);
}

TEST(OperatingPoint, ConfigEffectiveSection) {
  const PointSpec s = spec_from(
      R"({"scheme": "KS", "effective": {"kappa_over_4wb": 0.1, "delta_over_wb": 1.2, "g_lin_over_wb": 0.004,
          "n_th": 3, "xi_re_over_wb": -0.1, "xi_im_over_wb": 0.05}})");
  const OperatingPoint op = resolve(s);
  EXPECT_DOUBLE_EQ(op.eff.kappa, 0.4);
  EXPECT_DOUBLE_EQ(op.eff.delta, 1.2);
  EXPECT_DOUBLE_EQ(op.eff.g_lin, 0.004);
  EXPECT_EQ(op.eff.xi, (complex{-0.1, 0.05}));
  EXPECT_TRUE(op.n_th_known);
  EXPECT_EQ(op.scheme, Scheme::KS);
}

TEST(Sweep, ParallelMapKeepsOrderAndFirstError) {
  const auto v = parallel_map(100, [](std::size_t i) { return static_cast<double>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<double>(i * i));
  try {
    parallel_map(50, [](std::size_t i) -> int {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(Sweep, DeterministicCsv) {
  Overrides ov;
  ov.scheme = "KS";
  ov.kappa_over_4wb = 1.0;
  ov.detuning = "opt";
  ov.g_over_wb = 0.05;
  ov.n_th = 10.0;
  SpecProvenance prov;
  const PointSpec s = build_spec({}, ov, prov);
  SweepSection sw{"kappa_over_4wb", 0.1, 10.0, 7, Spacing::Log, {"rates", "n_b"}};
  const auto a = run_sweep(s, prov, sw, {});
  const auto b = run_sweep(s, prov, sw, {});
  ASSERT_EQ(a.files.size(), 1u);
  EXPECT_EQ(a.files[0].text, b.files[0].text);
  EXPECT_EQ(a.meta.dump(), b.meta.dump());
}

TEST(Sweep, PhononOutputsNeedThermalOccupation) {
  Overrides ov;
  ov.kappa_over_4wb = 1.0;
  ov.detuning = "opt";
  SpecProvenance prov;
  const PointSpec s = build_spec({}, ov, prov);
  SweepSection sw{"kappa_over_4wb", 0.1, 10.0, 3, Spacing::Log, {"n_b"}};
  EXPECT_THROW(run_sweep(s, prov, sw, {}), ConfigError);
  sw.axis = "n_th";
  sw.start = 0.0;
  sw.stop = 10.0;
  sw.spacing = Spacing::Linear;
  EXPECT_NO_THROW(run_sweep(s, prov, sw, {}));
}

TEST(Figures, PhononFiguresRequireThermalOccupation) {
  for (const char* name : {"fig2c", "fig2d", "fig3c", "fig3d", "fig4d"}) {
    try {
      run_figure(name, {}, {});
      FAIL() << name;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("n_th"), std::string::npos);
    }
  }
  EXPECT_THROW(run_figure("fig9z", {}, {}), ConfigError);
}

TEST(Figures, Fig2bEndpointRatio) {
  const auto res = run_figure("fig2b", {}, {});
  EXPECT_NEAR(res.meta["results"]["ratio_at_kappa_over_4wb_100"].get<double>(),
              (std::sqrt(40001.0) + 1.0) / 2.0, 1e-6);
}

TEST(Figures, HybridScaleMatchesStatedModulus) {
  figures::Context ctx;
  const auto hs = figures::scheme_point(Scheme::HS, figures::kKappaPanel, ctx);
  ASSERT_TRUE(hs);
  EXPECT_NEAR(std::abs(hs->eff.xi), 13.92, 1e-12);
}
