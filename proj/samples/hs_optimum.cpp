// Searches the two-photon drive for the hybrid scheme and checks the Gaussian
// steady state at the optimum.
#include <cstdio>

#include "kerrcool/gaussian.hpp"
#include "kerrcool/optimum.hpp"

int main() {
  using namespace kerrcool;
  EffectiveParams e;
  e.kappa = 0.4;  // kappa / 4 omega_b = 0.1
  e.delta = std::sqrt(e.kappa * e.kappa / 4.0 + 1.0);
  e.g_lin = e.kappa / 100.0;
  e.gamma_b = 1e-5;
  e.n_th = 1.0;

  OptimizeOptions opt;
  opt.mode = OptimizeMode::HS;
  const OptimumResult r = optimize_xi(e, opt);
  std::printf("xi_opt = %.6f %+.6fi  r_s = %.4f  phi_s = %.4f\n", r.xi_opt.real(), r.xi_opt.imag(),
              r.r_s_opt, r.phi_s_opt);
  std::printf("net rate / G^2 = %.5f  (x kappa/4G^2: %.5f)\n", r.net_rate_opt / (e.g_lin * e.g_lin),
              r.net_rate_opt * e.kappa / (4.0 * e.g_lin * e.g_lin));

  e.xi = r.xi_opt;
  const auto bath = SqueezedBathParams::make(r.r_s_opt, r.phi_s_opt);
  const CoolingReport weak = rates(e, bath);
  const CovarianceState st = gaussian_steady(e, bath);
  std::printf("n_b weak coupling = %.6g  exact = %.6g\n", weak.n_b, exact_phonon(st));
}
