// Kerr bistability of the magnon mode and the effective model on each branch.
#include <cstdio>

#include "kerrcool/steady.hpp"

int main() {
  using namespace kerrcool;
  FullSystemParams p;
  p.delta_a = 0.0;
  p.kappa_a = 1.0;
  p.kappa_m = 2.0;
  p.j_coupling = 1.0;
  p.delta_m = 10.0;
  p.kerr = 0.01;
  p.g0 = 1e-3;
  p.omega_b = 1.0;
  p.gamma_b = 1e-5;

  for (double eps : {30.0, 55.0, 80.0}) {
    p.drive_amp = eps;
    const auto roots = solve_steady(p);
    std::printf("drive %.0f: %zu steady state(s)\n", eps, roots.size());
    for (const auto& r : roots) {
      std::printf("  |m|^2 = %9.4f  residual %.1e", std::norm(r.m_s), r.residual);
      try {
        const auto [map, eff] = eliminate(p, r);
        std::printf("  kappa_eff = %.4f  xi = %.4f %+.4fi\n", eff.kappa, eff.xi.real(), eff.xi.imag());
      } catch (const InfeasibleError& e) {
        std::printf("  (%s)\n", e.what());
      }
    }
  }
}
