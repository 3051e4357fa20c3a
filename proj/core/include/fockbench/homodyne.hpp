#pragma once

#include <map>

#include "fockbench/operators.hpp"

namespace fockbench {

// Probabilities of the integer measurement outcomes l.
struct OutcomeDistribution {
  std::map<int, double> probs;
  double total = 0.0;  // = ||s||^2; deficit from 1 is the truncation loss
};

// Effective operator on the signal mode after outcome l:
//   matrix[m][n] = |alpha| <(|m> ox |alpha>), Pi^l (|n> ox |alpha>)>.
struct CollapseKernel {
  Eigen::MatrixXcd matrix;
  CoherentParams alpha;
  int l = 0;
};

// Xi = c1^dag c0 + c0^dag c1 (photon exchange between the two modes);
// block N has integer spectrum {-N, -N+2, ..., N}.
BlockOperator xi_operator(int total_cutoff);

// Orthogonal projector onto the Xi eigenspace with eigenvalue l. For
// |l| > total_cutoff the zero operator is returned.
BlockOperator projector_l(int l, int total_cutoff);

// Truncated generalized eigenvector |phi, l> = sum_j e^{i j phi} (Xi
// eigenvector with eigenvalue l in the block N = |l| + 2j).
MultiModeState phi_l_state(double phi, int l, int total_cutoff);

// probs[l] = <s| Pi^l |s>, computed per block without materializing Pi^l.
OutcomeDistribution outcome_distribution(const MultiModeState& s);

// Pi^l |s> without materializing Pi^l.
MultiModeState collapse_outcome(const MultiModeState& s, int l);

// Distribution of n1 - n0 (number difference in the standard basis; the
// post-beamsplitter frame of the same measurement).
OutcomeDistribution number_difference_distribution(const MultiModeState& s);

// Project onto the standard-basis subspace n1 - n0 = l.
MultiModeState collapse_number_difference(const MultiModeState& s, int l);

// (1/sqrt(2 pi)) exp(-(x - (conj(a) b + a conj(b))/|a|)^2 / 2).
double braunstein_density(double x, const CoherentParams& alpha, Complex beta);

// matrix[m][n] = |alpha| <(|m> ox |alpha>), Pi^l (|n> ox |alpha>)> for
// m, n < mode0_cutoff, on the two-mode space truncated at total_cutoff.
// Throws PrecisionError when the local-oscillator truncation loss exceeds
// the budget (1e-8).
CollapseKernel conditional_kernel(int l, const CoherentParams& alpha,
                                  int mode0_cutoff, int total_cutoff);

// (1/sqrt(2 pi)) |theta; x><theta; x| from quad_eigenstate.
DenseOperator limit_kernel(double theta, double x, int mode0_cutoff);

// Sum of Pi^l over integer l with a|alpha| < l <= b|alpha|.
MultiModeState interval_project(const MultiModeState& s, double a, double b,
                                double alpha_mag);

// P^{(a,b]} = (1/sqrt(2 pi)) Int_a^b |theta;r><theta;r| dr, uniform
// trapezoid with at least 256 nodes per unit length.
DenseOperator quadrature_interval_projector(double theta, double a, double b,
                                            int cutoff);

struct PairCutoffs {
  int mode0_cutoff;  // signal-mode cutoff used for the quadrature projector
  int total_cutoff;  // two-mode total photon number cutoff
};

// || Pi^{(a,b]|alpha|} |psi> - (P^{(a,b]} ox I) |psi> ||^2 for
// |psi> = |beta> ox |alpha>. Throws PrecisionError when either coherent
// truncation loss exceeds 1e-6.
double collapse_distance(Complex beta, const CoherentParams& alpha, double a,
                         double b, const PairCutoffs& cutoffs);

// Outcome index l = [x |alpha|]: round-half-away-from-zero by default,
// floor when floor_l is set.
int scaled_outcome_index(double x, double alpha_mag, bool floor_l);

}  // namespace fockbench
