#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace fockbench {

using Complex = std::complex<double>;

// Raised when a truncation budget cannot be met; carries the smallest
// cutoff that would satisfy the budget.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& msg, int suggested_cutoff)
      : std::runtime_error(msg), suggested_cutoff_(suggested_cutoff) {}
  int suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  int suggested_cutoff_;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cached log(n!) table, grown on demand. Thread-safe.
double log_factorial(int n);

// Coherent-state parameter alpha = |alpha| e^{i theta}.
struct CoherentParams {
  Complex alpha{0.0, 0.0};

  CoherentParams() = default;
  explicit CoherentParams(Complex a);

  double magnitude() const { return std::abs(alpha); }
  double phase() const { return std::arg(alpha); }
};

// Single-mode state: amps[n] is the coefficient of |n>, n = 0..cutoff-1.
struct FockState {
  Eigen::VectorXcd amps;

  FockState() = default;
  explicit FockState(int cutoff) : amps(Eigen::VectorXcd::Zero(cutoff)) {}
  explicit FockState(Eigen::VectorXcd a) : amps(std::move(a)) {}

  int cutoff() const { return static_cast<int>(amps.size()); }
  double norm2() const { return amps.squaredNorm(); }
};

// 2- or 3-mode state truncated by TOTAL photon number: only occupation
// tuples with sum <= total_cutoff are stored. Storage is grouped by total
// photon number N so that number-preserving operators act on contiguous
// blocks. Modes are indexed 0-based.
//
// 2 modes: index(n0, n1) = N(N+1)/2 + n0 with N = n0 + n1.
// 3 modes: index(n0, n1, n2) = N(N+1)(N+2)/6 + s(s+1)/2 + n0
//          with N = n0 + n1 + n2 and s = n0 + n1.
class MultiModeState {
 public:
  MultiModeState(int modes, int total_cutoff);

  int modes() const { return modes_; }
  int total_cutoff() const { return total_cutoff_; }

  Complex& at(int n0, int n1);
  Complex at(int n0, int n1) const;
  Complex& at(int n0, int n1, int n2);
  Complex at(int n0, int n1, int n2) const;

  double norm2() const { return amps_.squaredNorm(); }

  Eigen::VectorXcd& raw() { return amps_; }
  const Eigen::VectorXcd& raw() const { return amps_; }

  // Offset of the 2-mode block with total photon number N.
  static long block_offset2(int N) { return static_cast<long>(N) * (N + 1) / 2; }
  static long block_offset3(int N) {
    return static_cast<long>(N) * (N + 1) * (N + 2) / 6;
  }
  static long dimension(int modes, int total_cutoff);

 private:
  int modes_ = 2;
  int total_cutoff_ = 0;
  Eigen::VectorXcd amps_;
};

struct TruncatedState {
  FockState state;
  double truncation_loss;  // 1 - ||state||^2, clamped at 0
};

// amps[n] = e^{-|a|^2/2} a^n / sqrt(n!), n < cutoff. Not renormalized.
TruncatedState coherent_state(const CoherentParams& p, int cutoff);

// Poisson tail mass P(n >= cutoff) for mean |alpha|^2, log-domain.
double coherent_truncation_loss(double magnitude, int cutoff);

// Smallest cutoff c with coherent_truncation_loss(magnitude, c) <= budget.
int minimal_coherent_cutoff(double magnitude, double budget);

// Default single-mode cutoff rule: ceil(|a|^2 + 8|a| + 16).
int default_coherent_cutoff(double magnitude);

// Returns the truncation loss, or throws PrecisionError (with the minimal
// sufficient cutoff) when it exceeds the budget.
double require_truncation_budget(double magnitude, int cutoff, double budget);

FockState number_state(int n, int cutoff);

// Conjugate-linear in the first argument. Differing cutoffs are allowed
// (the shorter vector is zero-padded).
Complex inner(const FockState& a, const FockState& b);
Complex inner(const MultiModeState& a, const MultiModeState& b);

// f(w) = sum_n amps[n] w^n / sqrt(n!).
Complex bargmann_eval(const FockState& s, Complex w);

struct TensorResult {
  MultiModeState state;
  double discarded_weight;
};

// amps[(m,n)] = a[m] b[n] for m + n <= total_cutoff.
TensorResult tensor(const FockState& a, const FockState& b, int total_cutoff);

// Contract one mode of a 2-mode state with a bra: result[n] over the
// remaining mode, cutoff total_cutoff + 1.
FockState contract_mode(const MultiModeState& s, int mode, const FockState& bra);

// Contract one mode of a 3-mode state with a bra; the result is a 2-mode
// state with the same total cutoff.
MultiModeState contract_mode3(const MultiModeState& s, int mode,
                              const FockState& bra);

}  // namespace fockbench
