#include "fockbench/fock.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace fockbench {

namespace {
std::mutex g_logfact_mutex;
std::vector<double> g_logfact{0.0};  // log(0!) = 0
}  // namespace

double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  {
    std::lock_guard<std::mutex> lock(g_logfact_mutex);
    while (static_cast<int>(g_logfact.size()) <= n) {
      int k = static_cast<int>(g_logfact.size());
      g_logfact.push_back(g_logfact.back() + std::log(static_cast<double>(k)));
    }
    return g_logfact[n];
  }
}

CoherentParams::CoherentParams(Complex a) : alpha(a) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw std::invalid_argument("CoherentParams: non-finite alpha");
}

MultiModeState::MultiModeState(int modes, int total_cutoff)
    : modes_(modes), total_cutoff_(total_cutoff) {
  if (modes != 2 && modes != 3)
    throw ShapeError("MultiModeState: modes must be 2 or 3");
  if (total_cutoff < 0)
    throw std::invalid_argument("MultiModeState: negative total cutoff");
  amps_ = Eigen::VectorXcd::Zero(dimension(modes, total_cutoff));
}

long MultiModeState::dimension(int modes, int total_cutoff) {
  long t = total_cutoff;
  return modes == 2 ? (t + 1) * (t + 2) / 2 : (t + 1) * (t + 2) * (t + 3) / 6;
}

namespace {
long index2(const MultiModeState& s, int n0, int n1) {
  if (n0 < 0 || n1 < 0 || n0 + n1 > s.total_cutoff())
    throw std::out_of_range("MultiModeState: occupation out of range");
  return MultiModeState::block_offset2(n0 + n1) + n0;
}
long index3(const MultiModeState& s, int n0, int n1, int n2) {
  if (n0 < 0 || n1 < 0 || n2 < 0 || n0 + n1 + n2 > s.total_cutoff())
    throw std::out_of_range("MultiModeState: occupation out of range");
  int sum01 = n0 + n1;
  return MultiModeState::block_offset3(n0 + n1 + n2) +
         MultiModeState::block_offset2(sum01) + n0;
}
}  // namespace

Complex& MultiModeState::at(int n0, int n1) {
  if (modes_ != 2) throw ShapeError("at(n0,n1) requires a 2-mode state");
  return amps_[index2(*this, n0, n1)];
}
Complex MultiModeState::at(int n0, int n1) const {
  if (modes_ != 2) throw ShapeError("at(n0,n1) requires a 2-mode state");
  return amps_[index2(*this, n0, n1)];
}
Complex& MultiModeState::at(int n0, int n1, int n2) {
  if (modes_ != 3) throw ShapeError("at(n0,n1,n2) requires a 3-mode state");
  return amps_[index3(*this, n0, n1, n2)];
}
Complex MultiModeState::at(int n0, int n1, int n2) const {
  if (modes_ != 3) throw ShapeError("at(n0,n1,n2) requires a 3-mode state");
  return amps_[index3(*this, n0, n1, n2)];
}

TruncatedState coherent_state(const CoherentParams& p, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("coherent_state: cutoff < 1");
  FockState s(cutoff);
  double a2 = std::norm(p.alpha);
  double lmag = std::log(std::max(std::abs(p.alpha), 1e-300));
  double ph = std::arg(p.alpha);
  s.amps[0] = std::exp(-a2 / 2.0);
  for (int n = 1; n < cutoff; ++n) {
    if (p.alpha == Complex(0.0, 0.0)) break;
    double lm = -a2 / 2.0 + n * lmag - 0.5 * log_factorial(n);
    s.amps[n] = std::polar(std::exp(lm), n * ph);
  }
  double loss = 1.0 - s.norm2();
  return {std::move(s), std::max(loss, 0.0)};
}

double coherent_truncation_loss(double magnitude, int cutoff) {
  if (cutoff < 1) return 1.0;
  double mean = magnitude * magnitude;
  if (mean == 0.0) return 0.0;
  double lmean = std::log(mean);
  double sum = 0.0, maxterm = 0.0;
  int n = cutoff;
  int limit = cutoff + static_cast<int>(10.0 * mean) + 200;
  for (; n <= limit; ++n) {
    double lp = -mean + n * lmean - log_factorial(n);
    double p = std::exp(lp);
    sum += p;
    maxterm = std::max(maxterm, p);
    if (n > mean && (p < 1e-25 * maxterm || p < 1e-320)) break;
  }
  return sum;
}

int minimal_coherent_cutoff(double magnitude, double budget) {
  int c = 1;
  while (coherent_truncation_loss(magnitude, c) > budget) {
    ++c;
    if (c > 10'000'000)
      throw std::runtime_error("minimal_coherent_cutoff: budget unreachable");
  }
  return c;
}

int default_coherent_cutoff(double magnitude) {
  return static_cast<int>(
      std::ceil(magnitude * magnitude + 8.0 * magnitude + 16.0));
}

double require_truncation_budget(double magnitude, int cutoff, double budget) {
  double loss = coherent_truncation_loss(magnitude, cutoff);
  if (loss > budget) {
    int needed = minimal_coherent_cutoff(magnitude, budget);
    throw PrecisionError(
        "truncation budget exceeded: loss " + std::to_string(loss) +
            " > budget " + std::to_string(budget) + " at cutoff " +
            std::to_string(cutoff) + "; suggested cutoff " +
            std::to_string(needed),
        needed);
  }
  return loss;
}

FockState number_state(int n, int cutoff) {
  if (n < 0 || n >= cutoff)
    throw std::out_of_range("number_state: n outside [0, cutoff)");
  FockState s(cutoff);
  s.amps[n] = 1.0;
  return s;
}

Complex inner(const FockState& a, const FockState& b) {
  int m = std::min(a.cutoff(), b.cutoff());
  if (m == 0) return 0.0;
  return a.amps.head(m).dot(b.amps.head(m));  // Eigen dot conjugates lhs
}

Complex inner(const MultiModeState& a, const MultiModeState& b) {
  if (a.modes() != b.modes())
    throw ShapeError("inner: mode-count mismatch");
  // Blocks are ordered by total photon number, so the shared index set is
  // a common prefix of both storage vectors.
  long m = std::min(a.raw().size(), b.raw().size());
  if (m == 0) return 0.0;
  return a.raw().head(m).dot(b.raw().head(m));
}

Complex bargmann_eval(const FockState& s, Complex w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw std::invalid_argument("bargmann_eval: non-finite point");
  Complex acc = 0.0, t = 1.0;  // t = w^n / sqrt(n!)
  for (int n = 0; n < s.cutoff(); ++n) {
    acc += s.amps[n] * t;
    t *= w / std::sqrt(static_cast<double>(n + 1));
  }
  return acc;
}

TensorResult tensor(const FockState& a, const FockState& b, int total_cutoff) {
  if (total_cutoff < 1) throw std::invalid_argument("tensor: total_cutoff < 1");
  MultiModeState s(2, total_cutoff);
  double discarded = 0.0;
  for (int m = 0; m < a.cutoff(); ++m) {
    for (int n = 0; n < b.cutoff(); ++n) {
      Complex v = a.amps[m] * b.amps[n];
      if (m + n <= total_cutoff)
        s.at(m, n) = v;
      else
        discarded += std::norm(v);
    }
  }
  return {std::move(s), discarded};
}

FockState contract_mode(const MultiModeState& s, int mode,
                        const FockState& bra) {
  if (s.modes() != 2) throw ShapeError("contract_mode: 2-mode state expected");
  if (mode != 0 && mode != 1)
    throw std::out_of_range("contract_mode: mode must be 0 or 1");
  int T = s.total_cutoff();
  FockState out(T + 1);
  for (int keep = 0; keep <= T; ++keep) {
    Complex acc = 0.0;
    int nmax = std::min(T - keep, bra.cutoff() - 1);
    for (int nb = 0; nb <= nmax; ++nb) {
      Complex v = (mode == 0) ? s.at(nb, keep) : s.at(keep, nb);
      acc += std::conj(bra.amps[nb]) * v;
    }
    out.amps[keep] = acc;
  }
  return out;
}

MultiModeState contract_mode3(const MultiModeState& s, int mode,
                              const FockState& bra) {
  if (s.modes() != 3) throw ShapeError("contract_mode3: 3-mode state expected");
  if (mode < 0 || mode > 2)
    throw std::out_of_range("contract_mode3: mode must be 0, 1 or 2");
  int T = s.total_cutoff();
  MultiModeState out(2, T);
  for (int i = 0; i <= T; ++i) {
    for (int j = 0; i + j <= T; ++j) {
      Complex acc = 0.0;
      int nmax = std::min(T - i - j, bra.cutoff() - 1);
      for (int nb = 0; nb <= nmax; ++nb) {
        Complex v = (mode == 0)   ? s.at(nb, i, j)
                    : (mode == 1) ? s.at(i, nb, j)
                                  : s.at(i, j, nb);
        acc += std::conj(bra.amps[nb]) * v;
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace fockbench
