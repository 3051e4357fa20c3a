#pragma once

#include <functional>

#include "fockbench/fock.hpp"

namespace fockbench {

struct LimitCheckResult {
  Complex value;
  Complex target;
  double abs_error;
  int terms = 0;  // series terms actually summed (0 when not a series)
};

struct PoissonTail {
  double tail;   // P(|X - m| >= lambda sqrt(m)) for X ~ Poisson(m)
  double bound;  // 1 / lambda^2 (Chebyshev)
};

// tail = sum over j <= m - lambda sqrt(m) and j >= m + lambda sqrt(m) of
// e^{-m} m^j / j!, log-domain. tail <= bound always holds.
PoissonTail poisson_tail(double m, double lambda);

// e^{-M} sum_{j <= theta_frac * M} M^j / j!, log-domain.
double poisson_head(double M, double theta_frac);

// Trapezoid quadrature of
//   (|alpha| / sqrt(2 pi)) Int_{a-pi}^{a+pi} g(phi) e^{(cos(phi-a)-1)|alpha|^2} dphi,
// which converges to g(a) as |alpha| grows.
Complex dirac_sequence(const std::function<Complex(double)>& g, double a,
                       double alpha_mag, int nodes);

struct StirlingCheck {
  double ratio;   // j! / sqrt((j + l/2)! (j - l/2)!), log-gamma domain
  double target;  // e^{-x^2 / (4 mu)}
  double abs_error;
};

// l/2 = floor(x sqrt(2m)/2) + eps_l/2, j = floor(mu m) + delta_j. The ratio
// is always <= 1; it approaches the target as m grows.
StirlingCheck stirling_check(double m, double x, double mu, int eps_l,
                             int delta_j);
double stirling_ratio_error(double m, double x, double mu, int eps_l,
                            int delta_j);

// | (ubar + abar)^{l/2} / (-ubar + abar)^{l/2} - e^{x e^{i theta} ubar} |
// with l = x |alpha| (an even positive integer; the caller rounds).
double poly_exp_error(Complex u, double theta, double x, double alpha_mag);

// | m a log(1 + z/m) - z a |, principal branch, |z| < m.
double power_log_error(Complex z, Complex a, double m);

// Modulus of the head partial sum
//   e^{-|alpha|^2/2} sum_{j=0}^{l/2} e^{i j phi} (-ubar^2 + abar^2)^j / (2^j j!)
// with l/2 = floor(x |alpha| / 2); vanishes as |alpha| grows.
double head_truncation_error(Complex u, double phi, double theta, double x,
                             double alpha_mag);

// Compares e^{i l phi / 2} <alpha | phi, l> (exact series, log-domain)
// against the factored approximation
//   e^{x e^{i theta} u} e^{-e^{i phi} u^2 / 2} e^{-x^2/4}
//   e^{(cos(phi - 2 theta) - 1)|alpha|^2/2} e^{i sin(phi - 2 theta)|alpha|^2/2}
// at the Bargmann point u, with l = round(x |alpha|).
LimitCheckResult mainprop_factor_check(Complex u, double phi, double theta,
                                       double x, double alpha_mag);

}  // namespace fockbench
