#include "fockbench/teleport.hpp"

#include <cmath>

namespace fockbench {

EPRChannel epr_channel(double q, int cutoff) {
  if (!(std::abs(q) < 1.0))
    throw std::invalid_argument("epr_channel: need |q| < 1");
  if (cutoff < 1) throw std::invalid_argument("epr_channel: cutoff < 1");
  MultiModeState s(2, 2 * (cutoff - 1));
  double w = 1.0;
  for (int n = 0; n < cutoff; ++n) {
    s.at(n, n) = w;
    w *= q;
  }
  double discarded = std::pow(q, 2.0 * cutoff) / (1.0 - q * q);
  return {q, cutoff, std::move(s), discarded};
}

MultiModeState bell_state_vector(Complex alpha_c, int total_cutoff) {
  DenseOperator D = displacement(alpha_c, total_cutoff + 1);
  MultiModeState s(2, total_cutoff);
  double scale = 1.0 / std::sqrt(M_PI);
  for (int n = 0; 2 * n <= total_cutoff; ++n)
    for (int m = 0; m + n <= total_cutoff; ++m)
      s.at(m, n) = scale * D.m(m, n);
  return s;
}

FockState ideal_bell_measure(const FockState& psi0, double q, double x_minus,
                             double p_plus, int out_cutoff) {
  if (!(std::abs(q) < 1.0))
    throw std::invalid_argument("ideal_bell_measure: need |q| < 1");
  int dim = std::max(psi0.cutoff(), out_cutoff);
  Complex alpha(x_minus, p_plus);
  DenseOperator D = displacement(alpha, dim);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi.head(psi0.cutoff()) = psi0.amps;
  Eigen::VectorXcd displaced = D.m.adjoint() * psi;
  FockState out(out_cutoff);
  double w = 1.0 / std::sqrt(M_PI);
  for (int k = 0; k < out_cutoff; ++k) {
    out.amps[k] = w * displaced[k];
    w *= q;
  }
  return out;
}

Complex outcome_to_correction(int l, int k, double lo_mag) {
  if (!(lo_mag > 0.0))
    throw std::invalid_argument("outcome_to_correction: lo_mag <= 0");
  return Complex(l, k) / (std::sqrt(2.0) * lo_mag);
}

TeleportOutcome homodyne_bell_measure(const FockState& psi0, double q,
                                      double lo_mag, int l, int k,
                                      const TeleportCutoffs& cutoffs) {
  if (!(std::abs(q) < 1.0))
    throw std::invalid_argument("homodyne_bell_measure: need |q| < 1");
  if (!(lo_mag > 0.0))
    throw std::invalid_argument("homodyne_bell_measure: lo_mag <= 0");
  int T = cutoffs.total_cutoff;

  // |psi0> ox (sum_n q^n |n, n>) on modes (0, 1, 2).
  MultiModeState chi(3, T);
  double w = 1.0;
  for (int n = 0; n < cutoffs.epr_cutoff && 2 * n <= T; ++n) {
    for (int m = 0; m < psi0.cutoff() && m + 2 * n <= T; ++m)
      chi.at(m, n, n) = psi0.amps[m] * w;
    w *= q;
  }
  chi = apply_pair01(beamsplitter(M_PI / 4.0, T), chi);

  int mcut = T + 1;
  CollapseKernel Kx =
      conditional_kernel(l, CoherentParams(Complex(lo_mag, 0.0)), mcut,
                         cutoffs.kernel_total);
  CollapseKernel Kp =
      conditional_kernel(k, CoherentParams(Complex(0.0, lo_mag)), mcut,
                         cutoffs.kernel_total);
  FockState qx = quad_eigenstate(0.0, l / lo_mag, mcut).state;
  FockState qp = quad_eigenstate(M_PI / 2.0, k / lo_mag, mcut).state;

  FockState w0(Eigen::VectorXcd(Kx.matrix.adjoint() * qx.amps));
  FockState w1(Eigen::VectorXcd(Kp.matrix.adjoint() * qp.amps));
  MultiModeState mid = contract_mode3(chi, 0, w0);
  FockState out = contract_mode(mid, 0, w1);

  Complex alpha = outcome_to_correction(l, k, lo_mag);
  return {alpha.real(), alpha.imag(), std::move(out), alpha};
}

double state_fidelity(const FockState& a, const FockState& b) {
  double na = a.norm2(), nb = b.norm2();
  if (na <= 0.0 || nb <= 0.0)
    throw std::invalid_argument("state_fidelity: zero-norm state");
  return std::norm(inner(a, b)) / (na * nb);
}

double teleport_fidelity(const FockState& output, const FockState& psi0,
                         Complex alpha_c) {
  int dim = std::max(output.cutoff(), psi0.cutoff());
  DenseOperator D = displacement(alpha_c, dim);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi.head(psi0.cutoff()) = psi0.amps;
  FockState target(Eigen::VectorXcd(D.m.adjoint() * psi));
  return state_fidelity(target, output);
}

}  // namespace fockbench
