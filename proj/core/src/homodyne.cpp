#include "fockbench/homodyne.hpp"

#include <cmath>

namespace fockbench {

namespace {

// Index of the eigenvalue-l eigenvector inside block N, or -1 when the
// block has no such eigenvalue (parity or range mismatch).
int eigencolumn(int l, int N) {
  if (std::abs(l) > N || ((N - l) & 1)) return -1;
  return (N + l) / 2;
}

}  // namespace

BlockOperator xi_operator(int total_cutoff) {
  if (total_cutoff < 0)
    throw std::invalid_argument("xi_operator: total_cutoff < 0");
  BlockOperator op;
  op.blocks.reserve(total_cutoff + 1);
  for (int N = 0; N <= total_cutoff; ++N) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int a = 0; a < N; ++a) {
      double t = std::sqrt(static_cast<double>(a + 1) * (N - a));
      b(a, a + 1) = t;
      b(a + 1, a) = t;
    }
    op.blocks.push_back(std::move(b));
  }
  return op;
}

BlockOperator projector_l(int l, int total_cutoff) {
  if (total_cutoff < 0)
    throw std::invalid_argument("projector_l: total_cutoff < 0");
  BlockOperator op;
  op.blocks.reserve(total_cutoff + 1);
  for (int N = 0; N <= total_cutoff; ++N) {
    int a = eigencolumn(l, N);
    if (a < 0) {
      op.blocks.push_back(Eigen::MatrixXcd::Zero(N + 1, N + 1));
      continue;
    }
    Eigen::VectorXcd u = detail::half_splitter_block(N).col(a);
    op.blocks.push_back(u * u.adjoint());
  }
  return op;
}

MultiModeState phi_l_state(double phi, int l, int total_cutoff) {
  if (std::abs(l) > total_cutoff)
    throw std::invalid_argument("phi_l_state: |l| > total_cutoff");
  MultiModeState s(2, total_cutoff);
  for (int N = std::abs(l); N <= total_cutoff; N += 2) {
    int a = eigencolumn(l, N);
    int j = (N - std::abs(l)) / 2;
    Complex w = std::polar(1.0, j * phi);
    s.raw().segment(MultiModeState::block_offset2(N), N + 1) =
        w * detail::half_splitter_block(N).col(a);
  }
  return s;
}

OutcomeDistribution outcome_distribution(const MultiModeState& s) {
  if (s.modes() != 2)
    throw ShapeError("outcome_distribution: 2-mode state expected");
  OutcomeDistribution dist;
  for (int N = 0; N <= s.total_cutoff(); ++N) {
    Eigen::VectorXcd w =
        detail::half_splitter_block(N).adjoint() *
        s.raw().segment(MultiModeState::block_offset2(N), N + 1);
    for (int a = 0; a <= N; ++a) {
      double p = std::norm(w[a]);
      if (p > 0.0) dist.probs[2 * a - N] += p;
    }
  }
  for (const auto& [l, p] : dist.probs) dist.total += p;
  return dist;
}

MultiModeState collapse_outcome(const MultiModeState& s, int l) {
  if (s.modes() != 2)
    throw ShapeError("collapse_outcome: 2-mode state expected");
  MultiModeState out(2, s.total_cutoff());
  for (int N = 0; N <= s.total_cutoff(); ++N) {
    int a = eigencolumn(l, N);
    if (a < 0) continue;
    long off = MultiModeState::block_offset2(N);
    Eigen::VectorXcd u = detail::half_splitter_block(N).col(a);
    out.raw().segment(off, N + 1) = u * u.dot(s.raw().segment(off, N + 1));
  }
  return out;
}

OutcomeDistribution number_difference_distribution(const MultiModeState& s) {
  if (s.modes() != 2)
    throw ShapeError("number_difference_distribution: 2-mode state expected");
  OutcomeDistribution dist;
  for (int N = 0; N <= s.total_cutoff(); ++N) {
    for (int a = 0; a <= N; ++a) {
      double p = std::norm(s.at(a, N - a));
      if (p > 0.0) dist.probs[N - 2 * a] += p;
    }
  }
  for (const auto& [l, p] : dist.probs) dist.total += p;
  return dist;
}

MultiModeState collapse_number_difference(const MultiModeState& s, int l) {
  if (s.modes() != 2)
    throw ShapeError("collapse_number_difference: 2-mode state expected");
  MultiModeState out(2, s.total_cutoff());
  for (int N = 0; N <= s.total_cutoff(); ++N) {
    if (std::abs(l) > N || ((N - l) & 1)) continue;
    int a = (N - l) / 2;  // n1 - n0 = l with n0 = a
    out.at(a, N - a) = s.at(a, N - a);
  }
  return out;
}

double braunstein_density(double x, const CoherentParams& alpha,
                          Complex beta) {
  double mag = alpha.magnitude();
  if (mag <= 0.0)
    throw std::invalid_argument("braunstein_density: |alpha| must be > 0");
  double peak = 2.0 * std::real(std::conj(alpha.alpha) * beta) / mag;
  double d = x - peak;
  return std::exp(-d * d / 2.0) / std::sqrt(2.0 * M_PI);
}

CollapseKernel conditional_kernel(int l, const CoherentParams& alpha,
                                  int mode0_cutoff, int total_cutoff) {
  if (mode0_cutoff < 1 || total_cutoff < mode0_cutoff)
    throw std::invalid_argument("conditional_kernel: bad cutoffs");
  // Every |n> ox |alpha> column keeps local-oscillator amplitudes up to
  // index total_cutoff - n; budget-check the worst case n = mode0_cutoff-1.
  require_truncation_budget(alpha.magnitude(),
                            total_cutoff - mode0_cutoff + 2, 1e-8);
  FockState coh = coherent_state(alpha, total_cutoff + 1).state;
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(mode0_cutoff, mode0_cutoff);
  for (int N = std::abs(l); N <= total_cutoff; ++N) {
    int a = eigencolumn(l, N);
    if (a < 0) continue;
    const Eigen::MatrixXcd& U = detail::half_splitter_block(N);
    int mm = std::min(N + 1, mode0_cutoff);
    Eigen::VectorXcd v(mm);  // v[m] = conj(U(m,a)) coh[N-m]
    for (int m = 0; m < mm; ++m)
      v[m] = std::conj(U(m, a)) * coh.amps[N - m];
    K.topLeftCorner(mm, mm) += v.conjugate() * v.transpose();
  }
  K *= alpha.magnitude();
  return {std::move(K), alpha, l};
}

DenseOperator limit_kernel(double theta, double x, int mode0_cutoff) {
  FockState q = quad_eigenstate(theta, x, mode0_cutoff).state;
  return DenseOperator((q.amps * q.amps.adjoint()) / std::sqrt(2.0 * M_PI));
}

MultiModeState interval_project(const MultiModeState& s, double a, double b,
                                double alpha_mag) {
  if (s.modes() != 2)
    throw ShapeError("interval_project: 2-mode state expected");
  if (!(a < b)) throw std::invalid_argument("interval_project: need a < b");
  MultiModeState out(2, s.total_cutoff());
  double lo = a * alpha_mag, hi = b * alpha_mag;
  for (int N = 0; N <= s.total_cutoff(); ++N) {
    long off = MultiModeState::block_offset2(N);
    const Eigen::MatrixXcd& U = detail::half_splitter_block(N);
    Eigen::VectorXcd w = U.adjoint() * s.raw().segment(off, N + 1);
    for (int c = 0; c <= N; ++c) {
      int l = 2 * c - N;
      if (!(l > lo && l <= hi)) w[c] = 0.0;
    }
    out.raw().segment(off, N + 1) = U * w;
  }
  return out;
}

DenseOperator quadrature_interval_projector(double theta, double a, double b,
                                            int cutoff) {
  if (!(a < b))
    throw std::invalid_argument("quadrature_interval_projector: need a < b");
  int intervals = std::max(1, static_cast<int>(std::ceil(256.0 * (b - a))));
  double h = (b - a) / intervals;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int i = 0; i <= intervals; ++i) {
    double r = a + i * h;
    double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
    FockState q = quad_eigenstate(theta, r, cutoff).state;
    M.noalias() += (w * h) * (q.amps * q.amps.adjoint());
  }
  return DenseOperator(M / std::sqrt(2.0 * M_PI));
}

double collapse_distance(Complex beta, const CoherentParams& alpha, double a,
                         double b, const PairCutoffs& cutoffs) {
  int c0 = cutoffs.mode0_cutoff;
  int T = cutoffs.total_cutoff;
  if (c0 < 1 || T < c0) throw std::invalid_argument("collapse_distance: bad cutoffs");
  require_truncation_budget(std::abs(beta), c0, 1e-6);
  require_truncation_budget(alpha.magnitude(), T - c0 + 2, 1e-6);

  FockState sig = coherent_state(CoherentParams(beta), c0).state;
  FockState lo = coherent_state(alpha, T + 1).state;
  MultiModeState psi = tensor(sig, lo, T).state;

  MultiModeState projected = interval_project(psi, a, b, alpha.magnitude());
  DenseOperator P = quadrature_interval_projector(alpha.phase(), a, b, c0);
  MultiModeState factored = tensor(apply(P, sig), lo, T).state;

  return (projected.raw() - factored.raw()).squaredNorm();
}

int scaled_outcome_index(double x, double alpha_mag, bool floor_l) {
  double v = x * alpha_mag;
  if (floor_l) return static_cast<int>(std::floor(v));
  return static_cast<int>(std::round(v));  // round halves away from zero
}

}  // namespace fockbench
