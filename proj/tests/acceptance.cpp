// Acceptance gate: one pass/fail line per criterion. Exits nonzero if any
// criterion fails.
//
// Usage: acceptance <fixtures_dir> <cli_binary>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "fockbench/asymptotics.hpp"
#include "fockbench/teleport.hpp"

using json = nlohmann::json;
using namespace fockbench;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool ok) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << num << ": "
            << name << "\n";
  if (!ok) ++g_failures;
}

json load_fixture(const fs::path& dir, const std::string& name) {
  std::ifstream in(dir / name);
  if (!in) throw std::runtime_error("missing fixture: " + name);
  json j;
  in >> j;
  return j;
}

Eigen::MatrixXcd densify(const BlockOperator& op) {
  int T = op.total_cutoff();
  long dim = MultiModeState::dimension(2, T);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int N = 0; N <= T; ++N) {
    long off = MultiModeState::block_offset2(N);
    m.block(off, off, N + 1, N + 1) = op.blocks[N];
  }
  return m;
}

// --- criterion 1: structural identities at N_tot = 24 ---------------------
bool structural_suite() {
  const int T = 24;
  const double tol = 1e-10;
  bool ok = true;
  BlockOperator xi = xi_operator(T);
  std::vector<BlockOperator> proj;
  for (int l = -T; l <= T; ++l) proj.push_back(projector_l(l, T));
  for (int N = 0; N <= T; ++N) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    Eigen::MatrixXcd lsum = sum;
    for (int li = 0; li <= 2 * T; ++li) {
      const Eigen::MatrixXcd& p = proj[li].blocks[N];
      sum += p;
      lsum += double(li - T) * p;
      ok = ok && (p - p.adjoint()).cwiseAbs().maxCoeff() < tol;
      ok = ok && (p * p - p).cwiseAbs().maxCoeff() < tol;
    }
    ok = ok && (sum - Eigen::MatrixXcd::Identity(N + 1, N + 1))
                       .cwiseAbs()
                       .maxCoeff() < tol;
    ok = ok && (lsum - xi.blocks[N]).cwiseAbs().maxCoeff() < tol;
  }
  // pairwise orthogonality on a sample of distinct eigenvalues
  for (auto [l, k] : {std::pair{0, 2}, {-1, 1}, {3, -5}})
    for (int N = 0; N <= T; ++N)
      ok = ok && (proj[l + T].blocks[N] * proj[k + T].blocks[N])
                         .cwiseAbs()
                         .maxCoeff() < tol;
  // beamsplitter unitarity and group law
  BlockOperator u = beamsplitter(0.37, T);
  for (int N = 0; N <= T; ++N)
    ok = ok && (u.blocks[N].adjoint() * u.blocks[N] -
                Eigen::MatrixXcd::Identity(N + 1, N + 1))
                       .cwiseAbs()
                       .maxCoeff() < 1e-12;
  BlockOperator u1 = beamsplitter(0.3, T), u2 = beamsplitter(0.5, T),
                u3 = beamsplitter(0.8, T);
  for (int N = 0; N <= T; ++N)
    ok = ok && (u2.blocks[N] * u1.blocks[N] - u3.blocks[N])
                       .cwiseAbs()
                       .maxCoeff() < tol;
  return ok;
}

// --- criterion 2: 512-node phase integral -------------------------------
bool phase_integral() {
  const int T = 16, nodes = 512;
  bool ok = true;
  for (int l : {0, 1, 2, 5}) {
    long dim = MultiModeState::dimension(2, T);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < nodes; ++i) {
      MultiModeState p = phi_l_state(2.0 * M_PI * i / nodes, l, T);
      M.noalias() += (1.0 / nodes) * (p.raw() * p.raw().adjoint());
    }
    ok = ok && (M - densify(projector_l(l, T))).cwiseAbs().maxCoeff() < 1e-8;
  }
  return ok;
}

// --- criterion 3: closed form of the coherent contraction of |phi, 0> ----
bool phi0_closed_form() {
  const int T = 60;
  const Complex alpha(2.0, 0.0);
  bool ok = true;
  for (double phi : {0.4, 1.1, 2.7}) {
    MultiModeState p0 = phi_l_state(phi, 0, T);
    FockState coh = coherent_state(CoherentParams(alpha), T + 1).state;
    FockState f = contract_mode(p0, 1, coh);
    Complex ephi = std::polar(1.0, phi);
    Complex pref = std::exp(-std::norm(alpha) / 2.0 +
                            ephi * std::conj(alpha) * std::conj(alpha) / 2.0);
    for (int n = 0; n <= 20; ++n) {
      Complex want = 0.0;
      if (n % 2 == 0)
        want = pref * std::pow(-ephi / 2.0, n / 2) *
               std::exp(0.5 * log_factorial(n) - log_factorial(n / 2));
      ok = ok && std::abs(f.amps[n] - want) < 1e-10;
    }
  }
  return ok;
}

// --- criterion 4: distribution convergence + fixture ----------------------
bool distribution_convergence(const json& fix) {
  bool ok = true;
  for (double beta : {0.0, 0.5}) {
    int c_sig = std::max(default_coherent_cutoff(beta), 8);
    double prev = std::numeric_limits<double>::infinity();
    double endpoint = 0.0;
    for (double mag : {2.0, 4.0, 8.0}) {
      int T = default_coherent_cutoff(mag) + c_sig;
      CoherentParams alpha{Complex(mag, 0.0)};
      FockState sig =
          coherent_state(CoherentParams(Complex(beta, 0.0)), c_sig).state;
      FockState lo = coherent_state(alpha, T + 1).state;
      OutcomeDistribution dist =
          outcome_distribution(tensor(sig, lo, T).state);
      double sup = 0.0;
      for (const auto& [l, p] : dist.probs)
        sup = std::max(sup, std::abs(mag * p - braunstein_density(
                                                   l / mag, alpha,
                                                   Complex(beta, 0.0))));
      ok = ok && sup < prev;
      prev = sup;
      endpoint = sup;
    }
    for (const auto& e : fix)
      if (e.at("beta").get<double>() == beta)
        ok = ok && std::abs(endpoint - e.at("sup_err").get<double>()) < 1e-8;
  }
  return ok;
}

// --- criterion 5: kernel convergence + fixture ----------------------------
bool kernel_convergence(const json& fix) {
  const int c0 = 6;
  bool ok = true;
  for (double theta : {0.0, M_PI / 4.0}) {
    for (double x : {0.0, 0.5, 1.0}) {
      double prev = std::numeric_limits<double>::infinity();
      double endpoint = 0.0;
      for (double mag : {2.0, 4.0, 6.0, 8.0}) {
        int l = scaled_outcome_index(x, mag, false);
        int T = default_coherent_cutoff(mag);
        CollapseKernel K =
            conditional_kernel(l, CoherentParams(std::polar(mag, theta)),
                               c0, T);
        double frob = (K.matrix - limit_kernel(theta, x, c0).m).norm();
        ok = ok && frob < prev;
        prev = frob;
        endpoint = frob;
      }
      for (const auto& e : fix)
        if (std::abs(e.at("theta").get<double>() - theta) < 1e-12 &&
            e.at("x").get<double>() == x)
          ok = ok &&
               std::abs(endpoint - e.at("frobenius_dist").get<double>()) <
                   1e-8;
    }
  }
  return ok;
}

// --- criterion 6: interval collapse distance + fixture --------------------
bool pitop_convergence(const json& fix) {
  const int c0 = 40;
  bool ok = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double mag : {2.0, 4.0, 8.0}) {
    double d = collapse_distance(Complex(0.0),
                                 CoherentParams(Complex(mag, 0.0)), -1.0, 1.0,
                                 {c0, default_coherent_cutoff(mag) + c0});
    ok = ok && d < prev;
    prev = d;
  }
  double endpoint = collapse_distance(
      Complex(0.0), CoherentParams(Complex(8.0, 0.0)), -1.0, 1.0,
      {fix.at("mode0_cutoff").get<int>(), fix.at("total_cutoff").get<int>()});
  ok = ok &&
       std::abs(endpoint - fix.at("distance_sq").get<double>()) < 1e-8;
  return ok;
}

// --- criterion 7: asymptotics suite ---------------------------------------
bool asymptotics_suite() {
  bool ok = true;
  for (double m : {10.0, 100.0, 1000.0, 10000.0})
    for (double lam : {1.0, 2.0, 4.0, 8.0}) {
      PoissonTail t = poisson_tail(m, lam);
      ok = ok && t.tail <= t.bound;
    }
  for (double m : {100.0, 1000.0, 10000.0})
    for (double x : {0.5, 1.0, 2.0})
      for (double mu : {0.9, 1.0, 1.1})
        for (int eps : {0, 1})
          for (int dj : {0, 1})
            ok = ok && stirling_check(m, x, mu, eps, dj).ratio <= 1.0 + 1e-14;
  ok = ok && stirling_ratio_error(1e4, 1.0, 1.0, 0, 0) < 1e-2;

  auto gcos = [](double p) { return Complex(std::cos(p)); };
  double prev = std::numeric_limits<double>::infinity();
  for (double mag : {5.0, 10.0, 20.0}) {
    double err = std::abs(dirac_sequence(gcos, 0.0, mag, 4096) - 1.0);
    ok = ok && err < prev;
    prev = err;
  }
  ok = ok && prev < 1e-2;

  prev = std::numeric_limits<double>::infinity();
  for (double mag : {10.0, 20.0, 40.0}) {
    double err = poly_exp_error(Complex(1.0, 0.5), 0.3, 1.0, mag);
    ok = ok && err < prev;
    prev = err;
  }
  prev = std::numeric_limits<double>::infinity();
  for (double m : {100.0, 200.0, 400.0}) {
    double err = power_log_error(Complex(2.0, 1.0), Complex(0.5, 0.5), m);
    ok = ok && err < prev;
    prev = err;
  }
  ok = ok && head_truncation_error(Complex(1.0), 0.3, 0.0, 1.0, 30.0) < 1e-10;
  return ok;
}

// --- criterion 8: teleportation --------------------------------------------
bool teleportation(const json& fix) {
  bool ok = true;
  FockState psi = coherent_state(CoherentParams(Complex(0.3, 0.0)), 20).state;
  double prev = -1.0, f_first = 0.0, f_last = 0.0;
  size_t i = 0;
  for (double q : {0.8, 0.9, 0.95, 0.99}) {
    FockState o = ideal_bell_measure(psi, q, 0.0, 0.0, 20);
    double f = teleport_fidelity(o, psi, Complex(0.0));
    ok = ok && f > prev;
    prev = f;
    if (q == 0.8) f_first = f;
    f_last = f;
    ok = ok && std::abs(f - fix.at("ideal")[i++].at("fidelity")
                                .get<double>()) < 1e-8;
  }
  ok = ok &&
       f_last - f_first >= fix.at("margin").get<double>() - 1e-8;

  // homodyne pipeline approaches the ideal output as the oscillator grows
  const int T3 = 20;
  FockState ideal_out = ideal_bell_measure(psi, 0.9, 0.0, 0.0, T3 + 1);
  prev = -1.0;
  for (double lo : {3.0, 6.0, 9.0}) {
    TeleportCutoffs cuts{14, T3, default_coherent_cutoff(lo) + T3 + 1};
    TeleportOutcome o = homodyne_bell_measure(psi, 0.9, lo, 0, 0, cuts);
    double f = state_fidelity(o.collapsed, ideal_out);
    ok = ok && f > prev;
    prev = f;
  }

  // mode-local kernel reduction vs a direct 3-mode brute force at N_tot = 6
  {
    const int T = 6;
    const double lo = 0.1, q = 0.7;
    const int l = 0, k = 1;
    TeleportCutoffs cut{4, T, 12};
    TeleportOutcome got = homodyne_bell_measure(psi, q, lo, l, k, cut);

    MultiModeState chi(3, T);
    for (int n = 0; n < 4 && 2 * n <= T; ++n)
      for (int m = 0; m < psi.cutoff() && m + 2 * n <= T; ++m)
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
    ok = ok &&
         (got.collapsed.amps - brute.amps).cwiseAbs().maxCoeff() < 1e-10;
  }
  return ok;
}

// --- criterion 9: measurement equivalence ---------------------------------
bool measurement_equivalence() {
  const int T = 12;
  bool ok = true;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BlockOperator bs = beamsplitter(M_PI / 4.0, T);
  for (int trial = 0; trial < 5; ++trial) {
    FockState a(T + 1), b(T + 1);
    for (int n = 0; n <= T; ++n) {
      a.amps[n] = Complex(u(rng), u(rng));
      b.amps[n] = Complex(u(rng), u(rng));
    }
    a.amps /= std::sqrt(a.norm2());
    b.amps /= std::sqrt(b.norm2());
    MultiModeState s = tensor(a, b, T).state;
    MultiModeState rotated = apply(bs, s);
    OutcomeDistribution before = outcome_distribution(s);
    OutcomeDistribution after = number_difference_distribution(rotated);
    for (const auto& [l, p] : before.probs) {
      auto it = after.probs.find(l);
      double pa = it == after.probs.end() ? 0.0 : it->second;
      ok = ok && std::abs(p - pa) < 1e-12;
    }
    for (int l : {-2, 0, 1, 3}) {
      MultiModeState lhs = apply(bs, collapse_outcome(s, l));
      MultiModeState rhs = collapse_number_difference(rotated, l);
      ok = ok && (lhs.raw() - rhs.raw()).cwiseAbs().maxCoeff() < 1e-10;
    }
  }
  return ok;
}

// --- criterion 10: CLI contract --------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_volatile(std::string m) {
  for (const char* key : {"\"wall_time_ms\"", "\"output_dir\""}) {
    size_t p = m.find(key);
    if (p == std::string::npos) continue;
    size_t e = m.find('\n', p);
    m.erase(p, e - p);
  }
  return m;
}

int run_cli(const std::string& bin, const std::string& args,
            const fs::path& out_dir, const fs::path& log) {
  std::string cmd = "FOCKBENCH_OUT='" + out_dir.string() + "' '" + bin +
                    "' " + args + " >'" + log.string() + "' 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool cli_contract(const std::string& bin) {
  bool ok = true;
  fs::path dir = fs::temp_directory_path() / "fockbench_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "structural.toml");
    f << "experiment = \"structural\"\ntotal_cutoff = 16\n";
  }
  {
    std::ofstream f(dir / "too_small.toml");
    f << "experiment = \"distribution\"\nalpha_mags = [8.0]\n"
      << "betas = [0.0]\ntotal_cutoff = 30\n";
  }

  // determinism: two runs byte-identical modulo the wall-time field
  int rc1 = run_cli(bin, "structural --config " +
                             (dir / "structural.toml").string(),
                    dir / "a", dir / "log1.txt");
  int rc2 = run_cli(bin, "structural --config " +
                             (dir / "structural.toml").string(),
                    dir / "b", dir / "log2.txt");
  ok = ok && rc1 == 0 && rc2 == 0;
  ok = ok && slurp(dir / "a" / "structural_blocks.csv") ==
                 slurp(dir / "b" / "structural_blocks.csv");
  ok = ok && !slurp(dir / "a" / "structural_blocks.csv").empty();
  ok = ok && strip_volatile(slurp(dir / "a" / "manifest.json")) ==
                 strip_volatile(slurp(dir / "b" / "manifest.json"));

  // missing config: exit 2, no outputs
  int rc3 = run_cli(bin, "structural --config " + (dir / "nope.toml").string(),
                    dir / "c", dir / "log3.txt");
  ok = ok && rc3 == 2 && !fs::exists(dir / "c" / "manifest.json");

  // truncation budget: exit 3, suggested cutoff printed, no outputs
  int rc4 = run_cli(bin, "distribution --config " +
                             (dir / "too_small.toml").string(),
                    dir / "d", dir / "log4.txt");
  ok = ok && rc4 == 3 && !fs::exists(dir / "d" / "manifest.json") &&
       !fs::exists(dir / "d" / "distribution.csv");
  ok = ok && slurp(dir / "log4.txt").find("suggested cutoff") !=
                 std::string::npos;

  // experiment key mismatch: exit 2
  int rc5 = run_cli(bin, "collapse --config " +
                             (dir / "structural.toml").string(),
                    dir / "e", dir / "log5.txt");
  ok = ok && rc5 == 2 && !fs::exists(dir / "e" / "manifest.json");

  fs::remove_all(dir);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <fixtures_dir> <cli_binary>\n";
    return 2;
  }
  fs::path fixtures = argv[1];
  std::string cli = argv[2];

  try {
    report(1, "structural identities at N_tot = 24", structural_suite());
    report(2, "512-node phase integral reproduces the projectors",
           phase_integral());
    report(3, "coherent contraction of |phi, 0> matches the closed form",
           phi0_closed_form());
    report(4, "outcome distribution converges to the Gaussian density",
           distribution_convergence(load_fixture(fixtures,
                                                 "distribution.json")));
    report(5, "collapse kernel converges to the quadrature kernel",
           kernel_convergence(load_fixture(fixtures, "kernel.json")));
    report(6, "interval collapse distance vanishes with oscillator strength",
           pitop_convergence(load_fixture(fixtures, "pitop.json")));
    report(7, "asymptotic scalar checks", asymptotics_suite());
    report(8, "teleportation pipelines",
           teleportation(load_fixture(fixtures, "teleport.json")));
    report(9, "measurement equivalence across the beamsplitter",
           measurement_equivalence());
    report(10, "CLI determinism and exit codes", cli_contract(cli));
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << "\n";
    return 2;
  }

  std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED"
                                : "ACCEPTANCE FAILED") << " (" << 10 - g_failures
            << "/10)\n";
  return g_failures == 0 ? 0 : 1;
}
