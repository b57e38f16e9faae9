#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "kerrcool/model.hpp"

namespace oracles {

using kerrcool::complex;
using kerrcool::FullSystemParams;

// With g0 = 0 the cavity and magnon equations eliminate to
//   w |P0 + P1 w|^2 = J^2 eps^2,  w = |m|^2,
// P0 = c_a (i delta_m + kappa_m/2) + J^2, P1 = -i K c_a, c_a = i delta_a + kappa_a/2.
// Real roots from the trigonometric/Cardano form, refined by Newton.
inline std::vector<double> kerr_cubic_roots(const FullSystemParams& p) {
  const complex c_a{p.kappa_a / 2.0, p.delta_a};
  const complex p0 = c_a * complex{p.kappa_m / 2.0, p.delta_m} + p.j_coupling * p.j_coupling;
  const complex p1 = complex{0.0, -p.kerr} * c_a;
  const double a3 = std::norm(p1);
  const double a2 = 2.0 * (p0 * std::conj(p1)).real();
  const double a1 = std::norm(p0);
  const double a0 = -p.j_coupling * p.j_coupling * p.drive_amp * p.drive_amp;

  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double q = (3.0 * c - b * b) / 9.0;
  const double r = (9.0 * b * c - 27.0 * d - 2.0 * b * b * b) / 54.0;
  const double disc = q * q * q + r * r;
  std::vector<double> roots;
  if (disc > 0.0) {
    const double s = std::cbrt(r + std::sqrt(disc));
    const double t = std::cbrt(r - std::sqrt(disc));
    roots.push_back(s + t - b / 3.0);
  } else {
    const double theta = std::acos(r / std::sqrt(-q * q * q));
    for (int k = 0; k < 3; ++k)
      roots.push_back(2.0 * std::sqrt(-q) * std::cos((theta + 2.0 * std::numbers::pi * k) / 3.0) -
                      b / 3.0);
  }
  for (double& w : roots)
    for (int it = 0; it < 8; ++it) {
      const double f = ((a3 * w + a2) * w + a1) * w + a0;
      const double df = (3.0 * a3 * w + 2.0 * a2) * w + a1;
      w -= f / df;
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace oracles
