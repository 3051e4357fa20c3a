#pragma once

#include <vector>

#include "fockbench/fock.hpp"

namespace fockbench {

// Single-mode dense operator in the number basis.
struct DenseOperator {
  Eigen::MatrixXcd m;

  DenseOperator() = default;
  explicit DenseOperator(int dim) : m(Eigen::MatrixXcd::Zero(dim, dim)) {}
  explicit DenseOperator(Eigen::MatrixXcd mat) : m(std::move(mat)) {}

  int dim() const { return static_cast<int>(m.rows()); }
};

// Two-mode operator block-diagonal in total photon number. blocks[N] is an
// (N+1)x(N+1) matrix on span{|a, N-a>}, indexed by the FIRST-mode occupation
// a = 0..N.
struct BlockOperator {
  std::vector<Eigen::MatrixXcd> blocks;

  int total_cutoff() const { return static_cast<int>(blocks.size()) - 1; }
};

struct LadderPair {
  DenseOperator a;
  DenseOperator a_dag;
};

// a[n-1, n] = sqrt(n); a_dag = a^H.
LadderPair ladder(int cutoff);

DenseOperator number_op(int cutoff);

// xi(theta) = e^{-i theta} a + e^{i theta} a^dag.
DenseOperator quadrature_op(double theta, int cutoff);

// Truncated quadrature eigenstate |theta; r>:
//   amps[n] = e^{i n theta} e^{-r^2/4} He_n(r) / sqrt(n!)
// with He_n the probabilists' Hermite polynomials.
struct QuadEigenstate {
  double theta;
  double r;
  FockState state;
};

QuadEigenstate quad_eigenstate(double theta, double r, int cutoff);

// D(alpha) = e^{-|alpha|^2/2} exp(alpha a^dag) exp(-conj(alpha) a), each
// factor a finite triangular Taylor series on the truncated space.
DenseOperator displacement(Complex alpha, int cutoff);

DenseOperator adjoint(const DenseOperator& op);

// Two-mode beamsplitter U(theta): Bargmann substitution
//   f(u0, u1) -> f(u0 cos t + u1 sin t, -u0 sin t + u1 cos t).
// Every block is unitary on the truncated space.
BlockOperator beamsplitter(double theta, int total_cutoff);

FockState apply(const DenseOperator& op, const FockState& s);
MultiModeState apply(const BlockOperator& op, const MultiModeState& s);

// Apply a two-mode block operator to modes (0,1) of a 3-mode state. Exact:
// blocks preserve n0+n1 and leave n2 untouched.
MultiModeState apply_pair01(const BlockOperator& op, const MultiModeState& s);

namespace detail {

// Eigendecomposition of the real symmetric tridiagonal matrix T_N with zero
// diagonal and off-diagonal t_a = sqrt((a+1)(N-a)), a = 0..N-1. With
// D = diag(i^a) the beamsplitter block satisfies
//   U_N(theta) = D^H V e^{-i theta Lambda} V^T D,  (Lambda, V) = eig(T_N).
struct DiffBlockEig {
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
};

// Cached per N; thread-safe.
const DiffBlockEig& diff_block_eig(int N);

Eigen::MatrixXcd beamsplitter_block(double theta, int N);

// Cached U_N(pi/4) blocks; column a is the Xi eigenvector with eigenvalue
// 2a - N expressed in the standard basis.
const Eigen::MatrixXcd& half_splitter_block(int N);

}  // namespace detail

}  // namespace fockbench
