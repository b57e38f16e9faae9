#include <cmath>

#include <gtest/gtest.h>

#include "kerrcool/fock.hpp"
#include "kerrcool/optimum.hpp"

using namespace kerrcool;

namespace {

EffectiveParams weak_point(double kappa_over_4wb) {
  EffectiveParams e;
  e.omega_b = 1.0;
  e.kappa = 4.0 * kappa_over_4wb;
  e.delta = std::sqrt(e.kappa * e.kappa / 4.0 + 1.0);
  e.g_lin = e.kappa / 100.0;
  e.gamma_b = 1e-5;
  e.n_th = 1.0;
  return e;
}

Eigen::MatrixXcd random_hermitian(int d, unsigned seed) {
  std::srand(seed);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Random(d, d);
  return x + x.adjoint();
}

}  // namespace

TEST(Truncation, Guard) {
  EXPECT_THROW(validate(TruncationSpec{1, 4}), ValidationError);
  EXPECT_THROW(validate(TruncationSpec{4, 1}), ValidationError);
  EXPECT_THROW(validate(TruncationSpec{9, 8}), ValidationError);
  EXPECT_NO_THROW(validate(TruncationSpec{8, 8}));
  EXPECT_THROW(liouvillian(weak_point(1.0), CavityBath{}, {2, 40}), ValidationError);
}

TEST(Liouvillian, TracePreserving) {
  auto e = weak_point(1.0);
  e.g_lin = 0.3;
  e.xi = {0.2, -0.1};
  const auto l = liouvillian(e, CavityBath::squeezed(SqueezedBathParams::make(0.4, 0.9)), {4, 4});
  const int d = l.dim();
  for (Eigen::Index c = 0; c < l.matrix.cols(); ++c) {
    complex sum = 0.0;
    for (int i = 0; i < d; ++i) sum += l.matrix(i + i * d, c);
    ASSERT_LT(std::abs(sum), 1e-12) << c;
  }
}

TEST(Liouvillian, HermiticityPreserving) {
  auto e = weak_point(1.0);
  e.g_lin = 0.3;
  e.xi = {-0.2, 0.15};
  const auto l = liouvillian(e, CavityBath::squeezed(SqueezedBathParams::make(0.6, 2.0)), {3, 5});
  for (unsigned s = 1; s <= 5; ++s) {
    const Eigen::MatrixXcd h = random_hermitian(l.dim(), s);
    const Eigen::MatrixXcd out = apply_liouvillian(l, h);
    EXPECT_LT((out - out.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SteadyDensity, Vacuum) {
  auto e = weak_point(1.0);
  e.g_lin = 0.0;
  e.n_th = 0.0;
  const auto st = steady_density(liouvillian(e, std::nullopt, 0.0, {2, 2}));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(0, 0) = 1.0;
  EXPECT_LT((st.rho - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SteadyDensity, DecoupledThermalFixedPoint) {
  auto e = weak_point(1.0);
  e.g_lin = 0.0;
  e.n_th = 0.05;
  e.gamma_b = 1e-3;
  const TruncationSpec t{3, 8};
  const auto st = steady_density(liouvillian(e, std::nullopt, 0.0, t));
  const double n = e.n_th;
  for (int nb = 0; nb < t.dim_mech; ++nb) {
    const double p = std::pow(n, nb) / std::pow(n + 1.0, nb + 1);
    EXPECT_NEAR(st.rho(nb, nb).real(), p, 1e-6) << nb;
  }
  EXPECT_NEAR(moments(st).phonons, n, 1e-6);
  EXPECT_NEAR(moments(st).photons, 0.0, 1e-12);
}

TEST(SteadyDensity, StateIsPhysical) {
  auto e = weak_point(0.5);
  e.g_lin = 0.1;
  e.xi = {-0.1, 0.05};
  const auto st =
      steady_density(liouvillian(e, CavityBath::squeezed(SqueezedBathParams::make(0.3, 1.0)), {4, 4}));
  EXPECT_LT((st.rho - st.rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(st.rho.trace().real(), 1.0, 1e-12);
  EXPECT_GE(st.min_eigenvalue, -1e-9);
  EXPECT_LT(st.residual, 1e-9);
}

TEST(SteadyDensity, SingularGeneratorIsReported) {
  Liouvillian l;
  l.trunc = {2, 2};
  l.matrix = Eigen::MatrixXcd::Zero(16, 16);
  try {
    steady_density(l);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& err) {
    EXPECT_NE(std::string(err.what()).find("rcond"), std::string::npos);
  }
}

TEST(OracleEquivalence, ThermalCavityBathSmallTruncation) {
  auto e = weak_point(0.5);
  e.g_lin = 0.1;
  e.gamma_b = 0.02;
  e.n_th = 0.05;
  const double n_a = 0.02;
  const auto gauss = lyapunov_steady(drift_matrix(e), diffusion_matrix(e, std::nullopt, n_a));
  const auto m = moments(steady_density(liouvillian(e, std::nullopt, n_a, {5, 5})));
  const double tol = std::max(1e-3, 10.0 * m.edge_population);
  EXPECT_NEAR(m.phonons, exact_phonon(gauss), tol * exact_phonon(gauss));
  EXPECT_NEAR(m.photons, cavity_occupation(gauss), tol * cavity_occupation(gauss));
}

TEST(OracleEquivalence, HybridSchemeFullMoments) {
  auto e = weak_point(0.1);
  e.xi = {-0.19655, 0.0};
  const auto bath = hs_condition(e).value();
  const auto gauss = gaussian_steady(e, bath);
  const auto st = steady_density(liouvillian(e, bath, 0.0, {10, 6}));
  const auto m = moments(st);
  ASSERT_LT(m.edge_population, 1e-6);
  EXPECT_LT(std::abs(m.phonons - exact_phonon(gauss)) / exact_phonon(gauss), 1e-3);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      EXPECT_NEAR(m.covariance(r, c), gauss.v(r, c), 1e-3 * std::max(1.0, std::abs(gauss.v(r, c))))
          << r << "," << c;
  EXPECT_LT(m.mean.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(OracleEquivalence, StrongSqueezingConvergesWithCavityCutoff) {
  // r ~ 0.5: eight cavity levels are not enough, twelve are.
  auto e = weak_point(0.5);
  e.xi = {-0.2, 0.1};
  const auto bath = hs_condition(e).value();
  const double exact = exact_phonon(gaussian_steady(e, bath));
  double previous = 1e300;
  for (const TruncationSpec t : {TruncationSpec{6, 5}, TruncationSpec{9, 5}, TruncationSpec{12, 5}}) {
    const auto m = moments(steady_density(liouvillian(e, bath, 0.0, t)));
    const double err = std::abs(m.phonons - exact) / exact;
    EXPECT_LT(err, previous) << t.dim_cavity;
    previous = err;
    if (t.dim_cavity == 12) {
      EXPECT_LT(m.edge_population, 1e-6);
      EXPECT_LT(err, 1e-3);
    }
  }
}
