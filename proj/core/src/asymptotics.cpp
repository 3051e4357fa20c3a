#include "fockbench/asymptotics.hpp"

#include <cmath>
#include <vector>

namespace fockbench {

namespace {

double lgam(double x) { return std::lgamma(x); }

// Compensated (Kahan) accumulator.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double log_sum_exp(const std::vector<double>& logs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double l : logs) mx = std::max(mx, l);
  if (!std::isfinite(mx)) return mx;
  Kahan k;
  for (double l : logs) k.add(std::exp(l - mx));
  return mx + std::log(k.sum);
}

}  // namespace

PoissonTail poisson_tail(double m, double lambda) {
  if (!(m > 0.0) || !(lambda > 0.0))
    throw std::domain_error("poisson_tail: need m > 0 and lambda > 0");
  if (m > 1e7)
    throw std::length_error("poisson_tail: iteration budget exceeded");
  double s = lambda * std::sqrt(m);
  double lm = std::log(m);
  Kahan tail;
  long lower = static_cast<long>(std::floor(m - s));
  for (long j = 0; j <= lower; ++j)
    tail.add(std::exp(-m + j * lm - lgam(static_cast<double>(j) + 1.0)));
  long upper = static_cast<long>(std::ceil(m + s));
  double maxterm = 0.0;
  for (long j = upper;; ++j) {
    double p = std::exp(-m + j * lm - lgam(static_cast<double>(j) + 1.0));
    tail.add(p);
    maxterm = std::max(maxterm, p);
    if (j > m && (p < 1e-25 * maxterm || p < 1e-320)) break;
  }
  return {tail.sum, 1.0 / (lambda * lambda)};
}

double poisson_head(double M, double theta_frac) {
  if (!(theta_frac > 0.0) || !(theta_frac < 1.0))
    throw std::domain_error("poisson_head: need 0 < theta_frac < 1");
  if (M > 1e7) throw std::length_error("poisson_head: iteration budget exceeded");
  long jmax = static_cast<long>(std::floor(theta_frac * M));
  double lM = std::log(M);
  std::vector<double> logs;
  logs.reserve(jmax + 1);
  for (long j = 0; j <= jmax; ++j)
    logs.push_back(-M + j * lM - lgam(static_cast<double>(j) + 1.0));
  double l = log_sum_exp(logs);
  return l < -745.0 ? 0.0 : std::exp(l);
}

Complex dirac_sequence(const std::function<Complex(double)>& g, double a,
                       double alpha_mag, int nodes) {
  if (nodes < 1024) throw std::invalid_argument("dirac_sequence: nodes < 1024");
  double A = alpha_mag * alpha_mag;
  double h = 2.0 * M_PI / (nodes - 1);
  Kahan re, im;
  for (int i = 0; i < nodes; ++i) {
    double phi = a - M_PI + i * h;
    double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    Complex v = g(phi) * std::exp((std::cos(phi - a) - 1.0) * A) * w;
    re.add(v.real());
    im.add(v.imag());
  }
  return Complex(re.sum, im.sum) * (h * alpha_mag / std::sqrt(2.0 * M_PI));
}

StirlingCheck stirling_check(double m, double x, double mu, int eps_l,
                             int delta_j) {
  double lhalf = std::floor(x * std::sqrt(2.0 * m) / 2.0) + 0.5 * eps_l;
  double j = std::floor(mu * m) + delta_j;
  if (j < lhalf)
    throw std::domain_error("stirling_check: j < l/2");
  double ratio = std::exp(lgam(j + 1.0) - 0.5 * lgam(j + lhalf + 1.0) -
                          0.5 * lgam(j - lhalf + 1.0));
  double target = std::exp(-x * x / (4.0 * mu));
  return {ratio, target, std::abs(ratio - target)};
}

double stirling_ratio_error(double m, double x, double mu, int eps_l,
                            int delta_j) {
  return stirling_check(m, x, mu, eps_l, delta_j).abs_error;
}

double poly_exp_error(Complex u, double theta, double x, double alpha_mag) {
  long l = std::llround(x * alpha_mag);
  if (l <= 0 || (l & 1))
    throw std::domain_error("poly_exp_error: l = x|alpha| must be even > 0");
  Complex abar = std::polar(alpha_mag, -theta);
  if (std::abs(abar - u) == 0.0)
    throw std::domain_error("poly_exp_error: pole at u = conj(alpha)");
  double h = static_cast<double>(l) / 2.0;
  Complex value = std::exp(h * (std::log(u + abar) - std::log(abar - u)));
  Complex target = std::exp(x * std::polar(1.0, theta) * u);
  return std::abs(value - target);
}

double power_log_error(Complex z, Complex a, double m) {
  if (!(std::abs(z) < m))
    throw std::domain_error("power_log_error: need |z| < m");
  return std::abs(m * a * std::log(1.0 + z / m) - z * a);
}

double head_truncation_error(Complex u, double phi, double theta, double x,
                             double alpha_mag) {
  if (!(x > 0.0)) throw std::domain_error("head_truncation_error: need x > 0");
  double A = alpha_mag * alpha_mag;
  Complex abar = std::polar(alpha_mag, -theta);
  Complex w = abar * abar - u * u;
  long h = static_cast<long>(std::floor(x * alpha_mag / 2.0));
  double lw = std::abs(w) > 0.0 ? std::log(std::abs(w)) : 0.0;
  double aw = std::arg(w);
  Kahan re, im;
  for (long j = 0; j <= h; ++j) {
    double lm = -A / 2.0 - j * M_LN2 - lgam(static_cast<double>(j) + 1.0);
    if (std::abs(w) == 0.0 && j > 0) break;
    if (j > 0) lm += j * lw;
    Complex t = std::polar(std::exp(lm), j * (phi + aw));
    re.add(t.real());
    im.add(t.imag());
  }
  return std::abs(Complex(re.sum, im.sum));
}

LimitCheckResult mainprop_factor_check(Complex u, double phi, double theta,
                                       double x, double alpha_mag) {
  long l = std::llround(x * alpha_mag);
  if (l < 2) throw std::domain_error("mainprop_factor_check: need l >= 2");
  double A = alpha_mag * alpha_mag;
  Complex abar = std::polar(alpha_mag, -theta);
  Complex base = u + abar;       // enters as base^l
  Complex w = abar * abar - u * u;

  // value = e^{i l phi / 2} e^{-A/2} sum_j e^{i j phi} base^l w^j /
  //         (2^{l/2 + j} sqrt((l+j)! j!))
  Complex value = 0.0;
  int terms = 0;
  if (std::abs(base) > 0.0) {
    double lbase = std::log(std::abs(base));
    double lw = std::abs(w) > 0.0 ? std::log(std::abs(w)) : 0.0;
    Kahan re, im;
    double maxmag = 0.0;
    int small_run = 0;
    for (long j = 0; j < 20000; ++j) {
      double lm = -A / 2.0 + l * lbase - (0.5 * l + j) * M_LN2 -
                  0.5 * (lgam(static_cast<double>(l + j) + 1.0) +
                         lgam(static_cast<double>(j) + 1.0));
      double ph = 0.5 * l * phi + l * std::arg(base);
      if (j > 0) {
        if (std::abs(w) == 0.0) break;
        lm += j * lw;
        ph += j * (phi + std::arg(w));
      }
      if (lm > 700.0)
        throw PrecisionError("mainprop_factor_check: series term overflow", 0);
      double mag = std::exp(lm);
      Complex t = std::polar(mag, ph);
      re.add(t.real());
      im.add(t.imag());
      ++terms;
      maxmag = std::max(maxmag, mag);
      small_run = (mag < 1e-18 * maxmag) ? small_run + 1 : 0;
      if (small_run >= 50) break;
    }
    value = Complex(re.sum, im.sum);
  }

  double d = phi - 2.0 * theta;
  Complex target = std::exp(x * std::polar(1.0, theta) * u) *
                   std::exp(-std::polar(1.0, phi) * u * u / 2.0) *
                   std::exp(-x * x / 4.0) *
                   std::exp(Complex((std::cos(d) - 1.0) * A / 2.0,
                                    std::sin(d) * A / 2.0));
  return {value, target, std::abs(value - target), terms};
}

}  // namespace fockbench
