#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fockbench/teleport.hpp"

using namespace fockbench;

namespace {
double cdist(Complex a, Complex b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("epr_channel") {
  EPRChannel zero = epr_channel(0.0, 4);
  CHECK(cdist(zero.state.at(0, 0), 1.0) == 0.0);
  CHECK(std::abs(zero.state.norm2() - 1.0) < 1e-15);

  EPRChannel half = epr_channel(0.5, 20);
  double want = (1.0 - std::pow(0.5, 40)) / (1.0 - 0.25);
  CHECK(std::abs(half.state.norm2() - want) < 1e-14);
  CHECK(std::abs(half.discarded - std::pow(0.5, 40) / 0.75) < 1e-25);
  for (int n = 0; n < 5; ++n)
    CHECK(cdist(half.state.at(n, n), std::pow(0.5, n)) < 1e-15);
  CHECK(cdist(half.state.at(1, 2), 0.0) == 0.0);

  // q -> 1 at fixed cutoff: norm^2 -> cutoff
  CHECK(epr_channel(0.999999, 10).state.norm2() == doctest::Approx(10.0));

  CHECK_THROWS_AS(epr_channel(1.0, 4), std::invalid_argument);
}

TEST_CASE("bell_state_vector at alpha = 0") {
  MultiModeState b = bell_state_vector(Complex(0.0), 8);
  double s = 1.0 / std::sqrt(M_PI);
  for (int n = 0; n <= 4; ++n) CHECK(cdist(b.at(n, n), s) < 1e-14);
  CHECK(cdist(b.at(1, 0), 0.0) < 1e-14);
  CHECK(cdist(b.at(2, 1), 0.0) < 1e-14);
}

TEST_CASE("beamsplitter image of the Bell vector is a quadrature product") {
  // U(pi/4) bell_state_vector(a) = pi^{-1/2} |0; sqrt(2) x-> ox
  // |pi/2; sqrt(2) p+> with a = x- + i p+ (block-exact: the beamsplitter
  // preserves total photon number).
  const int T = 40;
  const double s = 1.0 / std::sqrt(M_PI);
  for (Complex a : {Complex(1.0, 0.0), Complex(0.4, -0.7)}) {
    MultiModeState img =
        apply(beamsplitter(M_PI / 4.0, T), bell_state_vector(a, T));
    FockState qx =
        quad_eigenstate(0.0, std::sqrt(2.0) * a.real(), T + 1).state;
    FockState qp =
        quad_eigenstate(M_PI / 2.0, std::sqrt(2.0) * a.imag(), T + 1).state;
    MultiModeState ref = tensor(qx, qp, T).state;
    for (int m = 0; m < 6; ++m)
      for (int n = 0; m + n <= 5; ++n)
        CHECK(cdist(img.at(m, n), s * ref.at(m, n)) < 1e-8);
  }
}

TEST_CASE("overlap of distinct Bell vectors shrinks with cutoff") {
  // normalized overlap of truncated generalized vectors; decays with an
  // oscillating Laguerre-tail, so only the endpoints are compared
  Complex a1(0.0, 0.0), a2(1.0, 0.0);
  auto cosine = [&](int T) {
    MultiModeState b1 = bell_state_vector(a1, T);
    MultiModeState b2 = bell_state_vector(a2, T);
    return std::abs(inner(b1, b2)) / std::sqrt(b1.norm2() * b2.norm2());
  };
  double c10 = cosine(10), c80 = cosine(80);
  CHECK(c10 < 0.2);
  CHECK(c80 < c10);
  CHECK(c80 < 0.05);
}

TEST_CASE("ideal_bell_measure") {
  FockState vac = number_state(0, 8);
  FockState out = ideal_bell_measure(vac, 0.9, 0.0, 0.0, 8);
  CHECK(cdist(out.amps[0], 1.0 / std::sqrt(M_PI)) < 1e-14);
  CHECK(out.amps.tail(7).cwiseAbs().maxCoeff() < 1e-14);

  // q -> 1: teleport fidelity increases
  FockState psi = coherent_state(CoherentParams(Complex(0.3, 0.0)), 20).state;
  double prev = 0.0;
  for (double q : {0.8, 0.9, 0.95, 0.99}) {
    FockState o = ideal_bell_measure(psi, q, 0.0, 0.0, 20);
    double f = teleport_fidelity(o, psi, Complex(0.0));
    CHECK(f > prev);
    prev = f;
  }
  CHECK(prev > 0.99);

  // nonzero outcome: output approaches D(alpha)^dag psi as q -> 1
  FockState o99 = ideal_bell_measure(psi, 0.99, 0.5, -0.25, 40);
  CHECK(teleport_fidelity(o99, psi, Complex(0.5, -0.25)) > 0.95);

  CHECK_THROWS_AS(ideal_bell_measure(vac, 1.2, 0.0, 0.0, 8),
                  std::invalid_argument);
}

TEST_CASE("fidelity") {
  FockState psi = coherent_state(CoherentParams(Complex(0.3, 0.2)), 24).state;
  CHECK(teleport_fidelity(psi, psi, Complex(0.0)) == doctest::Approx(1.0));

  FockState vac = number_state(0, 4);
  FockState one = number_state(1, 4);
  CHECK(teleport_fidelity(vac, one, Complex(0.0)) < 1e-20);

  // global phase invariance is exact
  FockState rot = psi;
  rot.amps *= std::polar(1.0, 1.234);
  CHECK(state_fidelity(psi, rot) == state_fidelity(psi, psi));

  CHECK_THROWS_AS(state_fidelity(FockState(4), psi), std::invalid_argument);
}

TEST_CASE("outcome_to_correction") {
  Complex c = outcome_to_correction(3, -2, 6.0);
  CHECK(cdist(c, Complex(3.0, -2.0) / (std::sqrt(2.0) * 6.0)) == 0.0);
  CHECK_THROWS_AS(outcome_to_correction(0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("homodyne_bell_measure approaches the ideal measurement") {
  FockState vac = number_state(0, 8);
  const int T = 16;
  FockState ideal = ideal_bell_measure(vac, 0.9, 0.0, 0.0, T + 1);
  double prev = 0.0;
  for (double lo : {3.0, 6.0}) {
    TeleportCutoffs cut{12, T, default_coherent_cutoff(lo) + T + 1};
    TeleportOutcome o = homodyne_bell_measure(vac, 0.9, lo, 0, 0, cut);
    CHECK(o.x_minus == 0.0);
    CHECK(o.p_plus == 0.0);
    double f = state_fidelity(o.collapsed, ideal);
    CHECK(f > prev);
    prev = f;
  }
  CHECK(prev > 0.99);
}

TEST_CASE("kernel contraction matches a 3-mode brute force at N_tot = 6") {
  // Rebuild homodyne_bell_measure's pipeline with explicit loops.
  const int T = 6;
  const double lo = 0.1, q = 0.7;
  const int l = 0, k = 1;
  FockState psi = coherent_state(CoherentParams(Complex(0.3, 0.0)), 7).state;
  TeleportCutoffs cut{4, T, 12};
  TeleportOutcome got = homodyne_bell_measure(psi, q, lo, l, k, cut);

  MultiModeState chi(3, T);
  for (int n = 0; n < 4 && 2 * n <= T; ++n)
    for (int m = 0; m < 7 && m + 2 * n <= T; ++m)
      chi.at(m, n, n) = psi.amps[m] * std::pow(q, n);
  chi = apply_pair01(beamsplitter(M_PI / 4.0, T), chi);

  CollapseKernel Kx =
      conditional_kernel(l, CoherentParams(Complex(lo, 0.0)), T + 1, 12);
  CollapseKernel Kp =
      conditional_kernel(k, CoherentParams(Complex(0.0, lo)), T + 1, 12);
  FockState qx = quad_eigenstate(0.0, l / lo, T + 1).state;
  FockState qp = quad_eigenstate(M_PI / 2.0, k / lo, T + 1).state;

  FockState brute(T + 1);
  for (int n2 = 0; n2 <= T; ++n2)
    for (int n0 = 0; n0 <= T - n2; ++n0)
      for (int n1 = 0; n0 + n1 + n2 <= T; ++n1) {
        Complex w = 0.0;
        for (int m0 = 0; m0 <= T; ++m0)
          for (int m1 = 0; m1 <= T; ++m1)
            w += std::conj(qx.amps[m0]) * Kx.matrix(m0, n0) *
                 std::conj(qp.amps[m1]) * Kp.matrix(m1, n1);
        brute.amps[n2] += w * chi.at(n0, n1, n2);
      }
  CHECK((got.collapsed.amps - brute.amps).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("conditional kernel equals the explicit pair projection") {
  // K[m][n] = |lo| <(|m> ox |lo>), Pi^l (|n> ox |lo>)> with a shared pair
  // truncation; validates the mode-local reduction used by the teleport
  // pipeline.
  const int P = 20, c0 = 5;
  const double lo = 0.8;
  for (int l : {0, 1, -2}) {
    CollapseKernel kern =
        conditional_kernel(l, CoherentParams(Complex(lo, 0.0)), c0, P);
    auto coh = coherent_state(CoherentParams(Complex(lo, 0.0)), P + 1).state;
    Eigen::MatrixXcd ref(c0, c0);
    std::vector<MultiModeState> collapsed;
    for (int n = 0; n < c0; ++n)
      collapsed.push_back(
          collapse_outcome(tensor(number_state(n, P + 1), coh, P).state, l));
    for (int m = 0; m < c0; ++m) {
      MultiModeState bm = tensor(number_state(m, P + 1), coh, P).state;
      for (int n = 0; n < c0; ++n) ref(m, n) = lo * inner(bm, collapsed[n]);
    }
    CHECK((kern.matrix - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}
