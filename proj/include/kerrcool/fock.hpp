#pragma once

// Brute-force check of the Gaussian layer: the linearized master equation in
// a truncated Fock space, solved for its steady state by dense LU.
//
// Basis ordering is cavity (x) mechanics, |n_a, n_b> -> n_a * dim_mech + n_b.
// Density matrices are vectorized column-major, so rho -> A rho B has matrix
// kron(B^T, A).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "kerrcool/gaussian.hpp"
#include "kerrcool/model.hpp"

namespace kerrcool {

struct TruncationSpec {
  int dim_cavity = 2;
  int dim_mech = 2;

  int dim() const noexcept { return dim_cavity * dim_mech; }
};

inline const TruncationSpec& validate(const TruncationSpec& t) {
  if (t.dim_cavity < 2) detail::fail("dim_cavity", "dim_cavity must be >= 2");
  if (t.dim_mech < 2) detail::fail("dim_mech", "dim_mech must be >= 2");
  if (t.dim() > 64) detail::fail("dim", "dim_cavity * dim_mech must be <= 64");
  return t;
}

struct Liouvillian {
  Eigen::MatrixXcd matrix;  // dim^2 x dim^2, acts on column-major vec(rho)
  TruncationSpec trunc;

  int dim() const noexcept { return trunc.dim(); }
};

struct DensityMatrix {
  Eigen::MatrixXcd rho;
  TruncationSpec trunc;
  double residual = 0.0;        // |L vec(rho)|
  double min_eigenvalue = 0.0;  // of rho
};

/// Ladder operators embedded in the product space.
struct ModeOperators {
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd b;
};

namespace detail {

inline Eigen::MatrixXcd annihilation(int n) {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) op(k - 1, k) = std::sqrt(static_cast<double>(k));
  return op;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

struct Entry {
  Eigen::Index row, col;
  complex value;
};

inline std::vector<Entry> nonzeros(const Eigen::MatrixXcd& m) {
  std::vector<Entry> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != complex{}) out.push_back({i, j, m(i, j)});
  return out;
}

// L += c * (rho -> A rho B)
inline void add_sandwich(Eigen::MatrixXcd& l, complex c, const Eigen::MatrixXcd& a,
                         const Eigen::MatrixXcd& b) {
  const Eigen::Index d = a.rows();
  const auto na = nonzeros(a);
  const auto nb = nonzeros(b);
  for (const auto& ea : na)      // A(i, k)
    for (const auto& eb : nb)    // B(l, j)
      l(ea.row + eb.col * d, ea.col + eb.row * d) += c * ea.value * eb.value;
}

// rate/2 * (2 c rho d - d c rho - rho d c) with (c, d) = (jump, jump^dag)
// generalized to an arbitrary pair so the squeezing terms fit the same shape.
inline void add_dissipator(Eigen::MatrixXcd& l, complex rate, const Eigen::MatrixXcd& left,
                           const Eigen::MatrixXcd& right, const Eigen::MatrixXcd& id) {
  const Eigen::MatrixXcd prod = right * left;
  add_sandwich(l, rate, left, right);
  add_sandwich(l, -rate / 2.0, prod, id);
  add_sandwich(l, -rate / 2.0, id, prod);
}

}  // namespace detail

inline ModeOperators mode_operators(const TruncationSpec& t) {
  validate(t);
  const Eigen::MatrixXcd ic = Eigen::MatrixXcd::Identity(t.dim_cavity, t.dim_cavity);
  const Eigen::MatrixXcd im = Eigen::MatrixXcd::Identity(t.dim_mech, t.dim_mech);
  return {detail::kron(detail::annihilation(t.dim_cavity), im),
          detail::kron(ic, detail::annihilation(t.dim_mech))};
}

/// Lindblad generator of the effective Hamiltonian with a squeezed (or
/// thermal) cavity reservoir and a thermal mechanical reservoir.
inline Liouvillian liouvillian(const EffectiveParams& params, const CavityBath& bath,
                               const TruncationSpec& trunc) {
  const EffectiveParams& e = validate(params);
  validate(trunc);
  const auto ops = mode_operators(trunc);
  const int d = trunc.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd& a = ops.a;
  const Eigen::MatrixXcd& b = ops.b;
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd bd = b.adjoint();

  const Eigen::MatrixXcd h = e.delta * ad * a + e.omega_b * bd * b +
                             e.g_lin * (a + ad) * (b + bd) + std::conj(e.xi) * a * a +
                             e.xi * ad * ad;

  Liouvillian out;
  out.trunc = trunc;
  out.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d) * d,
                                      static_cast<Eigen::Index>(d) * d);
  constexpr complex i{0.0, 1.0};
  detail::add_sandwich(out.matrix, -i, h, id);
  detail::add_sandwich(out.matrix, i, id, h);

  const double n = bath.occupation;
  const complex m = bath.correlation;
  detail::add_dissipator(out.matrix, e.kappa * (n + 1.0), a, ad, id);
  detail::add_dissipator(out.matrix, e.kappa * n, ad, a, id);
  if (m != complex{}) {
    // -kappa M/2 (2 a^dag rho a^dag - a^dag^2 rho - rho a^dag^2) and its conjugate.
    detail::add_dissipator(out.matrix, -e.kappa * m, ad, ad, id);
    detail::add_dissipator(out.matrix, -e.kappa * std::conj(m), a, a, id);
  }
  detail::add_dissipator(out.matrix, e.gamma_b * (e.n_th + 1.0), b, bd, id);
  detail::add_dissipator(out.matrix, e.gamma_b * e.n_th, bd, b, id);
  return out;
}

inline Liouvillian liouvillian(const EffectiveParams& e,
                               const std::optional<SqueezedBathParams>& bath, double n_a,
                               const TruncationSpec& trunc) {
  return liouvillian(e, bath ? CavityBath::squeezed(*bath) : CavityBath::thermal(n_a), trunc);
}

/// Applies the generator to a density matrix.
inline Eigen::MatrixXcd apply_liouvillian(const Liouvillian& l, const Eigen::MatrixXcd& rho) {
  const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  const Eigen::VectorXcd out = l.matrix * v;
  return Eigen::Map<const Eigen::MatrixXcd>(out.data(), rho.rows(), rho.cols());
}

/// Solves L(rho) = 0 with tr rho = 1. The generator preserves Hermiticity, so
/// the solve runs over the d^2 real parameters of a Hermitian matrix, with the
/// (0,0) population equation replaced by the trace constraint.
inline DensityMatrix steady_density(const Liouvillian& l) {
  const int d = l.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  auto vec_index = [d](int i, int j) {
    return static_cast<Eigen::Index>(i) + static_cast<Eigen::Index>(j) * d;
  };

  // Parameter q -> (i, j, kind): kind 0 = population, 1 = Re rho_ij, 2 = Im rho_ij (i < j).
  struct Param {
    int i, j, kind;
  };
  std::vector<Param> params;
  params.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i) {
      if (i == j) {
        params.push_back({i, j, 0});
      } else {
        params.push_back({i, j, 1});
        params.push_back({i, j, 2});
      }
    }

  Eigen::MatrixXd real_op(n, n);
  Eigen::VectorXcd column(n);
  constexpr complex i_unit{0.0, 1.0};
  for (Eigen::Index q = 0; q < n; ++q) {
    const Param& p = params[static_cast<std::size_t>(q)];
    if (p.kind == 0) {
      column = l.matrix.col(vec_index(p.i, p.i));
    } else if (p.kind == 1) {
      column = l.matrix.col(vec_index(p.i, p.j)) + l.matrix.col(vec_index(p.j, p.i));
    } else {
      column = i_unit * l.matrix.col(vec_index(p.i, p.j)) -
               i_unit * l.matrix.col(vec_index(p.j, p.i));
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      const Param& pr = params[static_cast<std::size_t>(r)];
      const complex y = column(vec_index(pr.i, pr.j));
      real_op(r, q) = pr.kind == 2 ? y.imag() : y.real();
    }
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index q = 0; q < n; ++q)
    real_op(0, q) = params[static_cast<std::size_t>(q)].kind == 0 ? 1.0 : 0.0;
  rhs(0) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(real_op);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = pivots.maxCoeff() > 0.0 ? std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff()) : 0.0;
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "steady state not unique or generator singular (rcond " << rcond << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericalError("steady state solve produced non-finite values (rcond 0)");

  DensityMatrix out;
  out.trunc = l.trunc;
  out.rho = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index q = 0; q < n; ++q) {
    const Param& p = params[static_cast<std::size_t>(q)];
    if (p.kind == 0) {
      out.rho(p.i, p.i) = x(q);
    } else if (p.kind == 1) {
      out.rho(p.i, p.j) += x(q);
      out.rho(p.j, p.i) += x(q);
    } else {
      out.rho(p.i, p.j) += i_unit * x(q);
      out.rho(p.j, p.i) -= i_unit * x(q);
    }
  }

  out.residual = apply_liouvillian(l, out.rho).norm();
  out.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(out.rho, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  const double scale = std::max(1.0, l.matrix.cwiseAbs().maxCoeff());
  if (out.residual > 1e-9 * scale || out.min_eigenvalue < -1e-9) {
    std::ostringstream msg;
    msg << "unphysical steady state: |L rho| = " << out.residual
        << ", min eigenvalue = " << out.min_eigenvalue << " (rcond " << rcond << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

inline complex expectation(const DensityMatrix& st, const Eigen::MatrixXcd& op) {
  return (st.rho * op).trace();
}

/// Moments of the truncated state in the Gaussian layer's conventions.
struct FockMoments {
  Matrix4 covariance = Matrix4::Zero();  // symmetrized, (x_a, p_a, x_b, p_b)
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  double photons = 0.0;
  double phonons = 0.0;
  double edge_population = 0.0;  // weight on the highest Fock level of either mode
};

inline FockMoments moments(const DensityMatrix& st) {
  const auto ops = mode_operators(st.trunc);
  const double s = std::sqrt(0.5);
  constexpr complex i{0.0, 1.0};
  const std::array<Eigen::MatrixXcd, 4> quad = {
      (s * (ops.a + ops.a.adjoint())).eval(), (-i * s * (ops.a - ops.a.adjoint())).eval(),
      (s * (ops.b + ops.b.adjoint())).eval(), (-i * s * (ops.b - ops.b.adjoint())).eval()};

  FockMoments m;
  for (int k = 0; k < 4; ++k) m.mean(k) = expectation(st, quad[k]).real();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const Eigen::MatrixXcd sym = 0.5 * (quad[r] * quad[c] + quad[c] * quad[r]);
      m.covariance(r, c) = expectation(st, sym).real() - m.mean(r) * m.mean(c);
    }
  m.photons = expectation(st, ops.a.adjoint() * ops.a).real();
  m.phonons = expectation(st, ops.b.adjoint() * ops.b).real();

  const int dc = st.trunc.dim_cavity, dm = st.trunc.dim_mech;
  for (int na = 0; na < dc; ++na)
    for (int nb = 0; nb < dm; ++nb)
      if (na == dc - 1 || nb == dm - 1) m.edge_population += st.rho(na * dm + nb, na * dm + nb).real();
  return m;
}

}  // namespace kerrcool
