#include "fockbench/operators.hpp"

#include <cmath>
#include <memory>
#include <mutex>

namespace fockbench {

LadderPair ladder(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("ladder: cutoff < 2");
  DenseOperator a(cutoff);
  for (int n = 1; n < cutoff; ++n)
    a.m(n - 1, n) = std::sqrt(static_cast<double>(n));
  DenseOperator ad(a.m.adjoint());
  return {std::move(a), std::move(ad)};
}

DenseOperator number_op(int cutoff) {
  DenseOperator n(cutoff);
  for (int k = 0; k < cutoff; ++k) n.m(k, k) = static_cast<double>(k);
  return n;
}

DenseOperator quadrature_op(double theta, int cutoff) {
  LadderPair lp = ladder(cutoff);
  Complex e{std::cos(theta), std::sin(theta)};
  return DenseOperator(std::conj(e) * lp.a.m + e * lp.a_dag.m);
}

QuadEigenstate quad_eigenstate(double theta, double r, int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("quad_eigenstate: cutoff < 2");
  // Normalized recurrence h_n = He_n(r)/sqrt(n!):
  //   h_{n+1} = (r h_n - sqrt(n) h_{n-1}) / sqrt(n+1);
  // bounded for all n, so no log-domain rescaling is needed.
  FockState s(cutoff);
  double scale = std::exp(-r * r / 4.0);
  double hprev = 0.0, h = 1.0;
  for (int n = 0; n < cutoff; ++n) {
    s.amps[n] = std::polar(scale * h, n * theta);
    double hnext = (r * h - std::sqrt(static_cast<double>(n)) * hprev) /
                   std::sqrt(static_cast<double>(n + 1));
    hprev = h;
    h = hnext;
  }
  return {theta, r, std::move(s)};
}

DenseOperator displacement(Complex alpha, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("displacement: cutoff < 1");
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(cutoff, cutoff);    // exp(a a^dag)
  Eigen::MatrixXcd down = Eigen::MatrixXcd::Zero(cutoff, cutoff);  // exp(-conj(a) a)
  for (int n = 0; n < cutoff; ++n) {
    Complex t = 1.0;
    up(n, n) = 1.0;
    down(n, n) = 1.0;
    for (int k = 1; n + k < cutoff; ++k) {
      // alpha^k / k! * sqrt((n+k)!/n!)
      t *= alpha / static_cast<double>(k) * std::sqrt(static_cast<double>(n + k));
      up(n + k, n) = t;
    }
    t = 1.0;
    for (int k = 1; n + k < cutoff; ++k) {
      t *= -std::conj(alpha) / static_cast<double>(k) *
           std::sqrt(static_cast<double>(n + k));
      down(n, n + k) = t;
    }
  }
  return DenseOperator(std::exp(-std::norm(alpha) / 2.0) * (up * down));
}

DenseOperator adjoint(const DenseOperator& op) {
  return DenseOperator(op.m.adjoint());
}

namespace detail {

namespace {
std::mutex g_eig_mutex;
std::vector<std::unique_ptr<DiffBlockEig>> g_eig_cache;
std::mutex g_half_mutex;
std::vector<std::unique_ptr<Eigen::MatrixXcd>> g_half_cache;

DiffBlockEig compute_diff_block_eig(int N) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N + 1);
  Eigen::VectorXd sub(std::max(N, 0));
  for (int a = 0; a < N; ++a)
    sub[a] = std::sqrt(static_cast<double>(a + 1) * (N - a));
  if (N == 0) return {Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("diff_block_eig: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}
}  // namespace

const DiffBlockEig& diff_block_eig(int N) {
  if (N < 0) throw std::invalid_argument("diff_block_eig: N < 0");
  std::lock_guard<std::mutex> lock(g_eig_mutex);
  if (static_cast<int>(g_eig_cache.size()) <= N) g_eig_cache.resize(N + 1);
  if (!g_eig_cache[N])
    g_eig_cache[N] = std::make_unique<DiffBlockEig>(compute_diff_block_eig(N));
  return *g_eig_cache[N];
}

Eigen::MatrixXcd beamsplitter_block(double theta, int N) {
  const DiffBlockEig& e = diff_block_eig(N);
  int dim = N + 1;
  Eigen::VectorXcd phase(dim);
  for (int k = 0; k < dim; ++k)
    phase[k] = std::polar(1.0, -theta * e.evals[k]);
  Eigen::MatrixXcd core =
      e.evecs.cast<Complex>() * phase.asDiagonal() *
      e.evecs.transpose().cast<Complex>();
  // Conjugate by D = diag(i^a): U = D^H core D.
  static const Complex kI(0.0, 1.0);
  Eigen::VectorXcd d(dim);
  Complex p = 1.0;
  for (int a = 0; a < dim; ++a) {
    d[a] = p;
    p *= kI;
  }
  return d.conjugate().asDiagonal() * core * d.asDiagonal();
}

const Eigen::MatrixXcd& half_splitter_block(int N) {
  if (N < 0) throw std::invalid_argument("half_splitter_block: N < 0");
  {
    std::lock_guard<std::mutex> lock(g_half_mutex);
    if (static_cast<int>(g_half_cache.size()) > N && g_half_cache[N])
      return *g_half_cache[N];
  }
  auto block = std::make_unique<Eigen::MatrixXcd>(
      beamsplitter_block(M_PI / 4.0, N));
  std::lock_guard<std::mutex> lock(g_half_mutex);
  if (static_cast<int>(g_half_cache.size()) <= N) g_half_cache.resize(N + 1);
  if (!g_half_cache[N]) g_half_cache[N] = std::move(block);
  return *g_half_cache[N];
}

}  // namespace detail

BlockOperator beamsplitter(double theta, int total_cutoff) {
  if (total_cutoff < 0)
    throw std::invalid_argument("beamsplitter: total_cutoff < 0");
  BlockOperator op;
  op.blocks.reserve(total_cutoff + 1);
  for (int N = 0; N <= total_cutoff; ++N)
    op.blocks.push_back(detail::beamsplitter_block(theta, N));
  return op;
}

FockState apply(const DenseOperator& op, const FockState& s) {
  if (op.dim() != s.cutoff())
    throw ShapeError("apply: operator/state dimension mismatch");
  return FockState(op.m * s.amps);
}

MultiModeState apply(const BlockOperator& op, const MultiModeState& s) {
  if (s.modes() != 2) throw ShapeError("apply: 2-mode state expected");
  if (op.total_cutoff() < s.total_cutoff())
    throw ShapeError("apply: block operator smaller than state");
  MultiModeState out(2, s.total_cutoff());
  for (int N = 0; N <= s.total_cutoff(); ++N) {
    long off = MultiModeState::block_offset2(N);
    out.raw().segment(off, N + 1) =
        op.blocks[N] * s.raw().segment(off, N + 1);
  }
  return out;
}

MultiModeState apply_pair01(const BlockOperator& op, const MultiModeState& s) {
  if (s.modes() != 3) throw ShapeError("apply_pair01: 3-mode state expected");
  if (op.total_cutoff() < s.total_cutoff())
    throw ShapeError("apply_pair01: block operator smaller than state");
  int T = s.total_cutoff();
  MultiModeState out(3, T);
  Eigen::VectorXcd seg;
  for (int N = 0; N <= T; ++N) {      // total photon number
    for (int n2 = 0; n2 <= N; ++n2) {  // spectator mode
      int P = N - n2;  // photons in the (0,1) pair
      seg.resize(P + 1);
      for (int n0 = 0; n0 <= P; ++n0) seg[n0] = s.at(n0, P - n0, n2);
      seg = op.blocks[P] * seg;
      for (int n0 = 0; n0 <= P; ++n0) out.at(n0, P - n0, n2) = seg[n0];
    }
  }
  return out;
}

}  // namespace fockbench
