#pragma once

#include "fockbench/homodyne.hpp"

namespace fockbench {

// Two-mode channel state sum_n q^n |n, n>, n < cutoff.
struct EPRChannel {
  double q;
  int cutoff;
  MultiModeState state;
  double discarded;  // q^{2 cutoff} / (1 - q^2)
};

EPRChannel epr_channel(double q, int cutoff);

// Generalized Bell vector pi^{-1/2} sum_n (D(alpha_c)|n>) ox |n>, truncated
// by total photon number.
MultiModeState bell_state_vector(Complex alpha_c, int total_cutoff);

// Ideal Bell measurement with outcome (x_minus, p_plus):
//   out[k] = pi^{-1/2} q^k <k| D(alpha)^dag |psi0>,  alpha = x_minus + i p_plus.
FockState ideal_bell_measure(const FockState& psi0, double q, double x_minus,
                             double p_plus, int out_cutoff);

struct TeleportOutcome {
  double x_minus;
  double p_plus;
  FockState collapsed;      // unnormalized mode-2 state
  Complex correction_alpha;  // x_minus + i p_plus
};

struct TeleportCutoffs {
  int epr_cutoff;     // per-mode cutoff of the channel
  int total_cutoff;   // 3-mode total photon number cutoff
  int kernel_total;   // two-mode total cutoff used for the collapse kernels
};

// Balanced-homodyne Bell measurement with integer outcomes (l, k):
// U(pi/4) on modes (0,1) of psi0 ox EPR, the two mode-local collapse
// kernels (local oscillators |lo_mag> at theta = 0 and |i lo_mag> at
// theta = pi/2), then full contraction of modes 0 and 1 against the
// quadrature eigenvectors the kernels collapse onto. Outcomes convert as
// x_minus = l / (sqrt(2) lo_mag), p_plus = k / (sqrt(2) lo_mag).
TeleportOutcome homodyne_bell_measure(const FockState& psi0, double q,
                                      double lo_mag, int l, int k,
                                      const TeleportCutoffs& cutoffs);

// Single place for the sqrt(2) outcome scaling.
Complex outcome_to_correction(int l, int k, double lo_mag);

// |<a, b>|^2 / (||a||^2 ||b||^2).
double state_fidelity(const FockState& a, const FockState& b);

// Fidelity of `output` against D(alpha_c)^dag |psi0>.
double teleport_fidelity(const FockState& output, const FockState& psi0,
                         Complex alpha_c);

}  // namespace fockbench
