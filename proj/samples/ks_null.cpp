// The Kerr-magnon scheme at its heating null, next to plain sideband cooling.
#include <cstdio>

#include "kerrcool/optimum.hpp"
#include "kerrcool/spectra.hpp"

int main() {
  using namespace kerrcool;
  EffectiveParams e;
  e.kappa = 40.0;  // kappa / 4 omega_b = 10, deep in the unresolved regime
  e.delta = std::sqrt(e.kappa * e.kappa / 4.0 + 1.0);
  e.g_lin = 0.1;
  e.n_th = 1e3;

  const CoolingReport sb = rates(e);
  e.xi = xi_ks(e);
  const CoolingReport ks = rates(e);

  std::printf("xi_KS = %.6f %+.6fi\n", e.xi.real(), e.xi.imag());
  std::printf("SB: Gamma- = %.6g  Gamma+ = %.6g  n_q = %.6f\n", sb.gamma_minus, sb.gamma_plus, sb.n_q);
  std::printf("KS: Gamma- = %.6g  Gamma+ = %.3g  n_q = %.3g\n", ks.gamma_minus, ks.gamma_plus, ks.n_q);
  std::printf("net-rate gain KS / SB = %.4f\n", ks.net_rate / sb.net_rate);
}
