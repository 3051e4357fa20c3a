#include "fockbench/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include "fockbench/asymptotics.hpp"
#include "fockbench/teleport.hpp"

namespace fockbench {

namespace {

using nlohmann::json;

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += "\r\n";
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
  }
};

std::string fmt_int(long long v) { return std::to_string(v); }

// Run fn(i) for i in [0, n), distributing across up to `jobs` threads.
// Results must be written into preallocated slots so ordering is fixed.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

json config_json(const ExperimentConfig& c) {
  return json{{"experiment", to_string(c.kind)},
              {"alpha_mags", c.alpha_mags},
              {"betas", c.betas},
              {"xs", c.xs},
              {"thetas", c.thetas},
              {"qs", c.qs},
              {"lo_mags", c.lo_mags},
              {"q", c.q},
              {"interval_a", c.interval_a},
              {"interval_b", c.interval_b},
              {"total_cutoff", c.total_cutoff},
              {"mode0_cutoff", c.mode0_cutoff},
              {"truncation_budget", c.truncation_budget},
              {"tolerance", c.tolerance},
              {"n_shots", c.n_shots},
              {"seed", c.seed},
              {"sample_alpha_mag", c.sample_alpha_mag},
              {"sample_beta", c.sample_beta},
              {"output_dir", c.output_dir},
              {"floor_l", c.floor_l},
              {"jobs", c.jobs}};
}

struct RunOutput {
  std::map<std::string, Csv> csvs;  // basename (no extension) -> table
  json metrics = json::object();
  bool pass = true;
};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- structural

RunOutput run_structural(const ExperimentConfig& cfg) {
  RunOutput out;
  int T = cfg.total_cutoff > 0 ? cfg.total_cutoff : 16;
  double tol = cfg.tolerance;

  std::vector<BlockOperator> projectors;
  for (int l = -T; l <= T; ++l) projectors.push_back(projector_l(l, T));
  BlockOperator xi = xi_operator(T);

  Csv blocks{{"total_n", "completeness_dev", "spectral_dev", "unitarity_dev"},
             {}};
  double worst_complete = 0.0, worst_spectral = 0.0, worst_unitary = 0.0;
  BlockOperator bs = beamsplitter(0.7, T);
  for (int N = 0; N <= T; ++N) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    Eigen::MatrixXcd spectral = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int l = -T; l <= T; ++l) {
      const Eigen::MatrixXcd& p = projectors[l + T].blocks[N];
      sum += p;
      spectral += static_cast<double>(l) * p;
    }
    double dc = max_abs(sum - Eigen::MatrixXcd::Identity(N + 1, N + 1));
    double ds = max_abs(spectral - xi.blocks[N]);
    double du = max_abs(bs.blocks[N].adjoint() * bs.blocks[N] -
                        Eigen::MatrixXcd::Identity(N + 1, N + 1));
    worst_complete = std::max(worst_complete, dc);
    worst_spectral = std::max(worst_spectral, ds);
    worst_unitary = std::max(worst_unitary, du);
    blocks.rows.push_back(
        {fmt_int(N), format_g17(dc), format_g17(ds), format_g17(du)});
  }
  out.csvs["structural_blocks"] = std::move(blocks);

  Csv proj{{"l", "hermiticity_dev", "idempotency_dev", "max_cross_dev"}, {}};
  double worst_herm = 0.0, worst_idem = 0.0, worst_cross = 0.0;
  for (int l = -T; l <= T; ++l) {
    const BlockOperator& P = projectors[l + T];
    double dh = 0.0, di = 0.0, dx = 0.0;
    for (int N = 0; N <= T; ++N) {
      const Eigen::MatrixXcd& p = P.blocks[N];
      dh = std::max(dh, max_abs(p - p.adjoint()));
      di = std::max(di, max_abs(p * p - p));
      for (int k = -N; k <= N; k += 2) {
        if (k == l) continue;
        dx = std::max(dx, max_abs(p * projectors[k + T].blocks[N]));
      }
    }
    worst_herm = std::max(worst_herm, dh);
    worst_idem = std::max(worst_idem, di);
    worst_cross = std::max(worst_cross, dx);
    proj.rows.push_back(
        {fmt_int(l), format_g17(dh), format_g17(di), format_g17(dx)});
  }
  out.csvs["structural_projectors"] = std::move(proj);

  // Group law U(0.3) U(0.5) = U(0.8), blockwise.
  BlockOperator u1 = beamsplitter(0.3, T), u2 = beamsplitter(0.5, T),
                u3 = beamsplitter(0.8, T);
  double worst_group = 0.0;
  for (int N = 0; N <= T; ++N)
    worst_group = std::max(
        worst_group, max_abs(u1.blocks[N] * u2.blocks[N] - u3.blocks[N]));

  out.metrics = {{"completeness_dev", worst_complete},
                 {"spectral_dev", worst_spectral},
                 {"unitarity_dev", worst_unitary},
                 {"hermiticity_dev", worst_herm},
                 {"idempotency_dev", worst_idem},
                 {"cross_dev", worst_cross},
                 {"group_law_dev", worst_group},
                 {"total_cutoff", T}};
  out.pass = worst_complete < tol && worst_spectral < tol &&
             worst_herm < tol && worst_idem < tol && worst_cross < tol &&
             worst_group < tol && worst_unitary < 1e-12;
  return out;
}

// -------------------------------------------------------------- distribution

RunOutput run_distribution(const ExperimentConfig& cfg) {
  RunOutput out;
  Csv csv{{"beta", "alpha_mag", "l", "x", "prob", "scaled_prob",
           "gauss_density", "abs_err"},
          {}};
  json sups = json::array();
  bool monotone = true;
  for (double beta : cfg.betas) {
    double prev_sup = std::numeric_limits<double>::infinity();
    for (double mag : cfg.alpha_mags) {
      int c_sig = std::max(default_coherent_cutoff(std::abs(beta)), 8);
      int T = cfg.total_cutoff > 0 ? cfg.total_cutoff
                                   : default_coherent_cutoff(mag) + c_sig;
      require_truncation_budget(mag, T - c_sig + 2, cfg.truncation_budget);
      require_truncation_budget(std::abs(beta), c_sig, cfg.truncation_budget);
      CoherentParams alpha{Complex(mag, 0.0)};
      FockState sig = coherent_state(CoherentParams(Complex(beta, 0.0)),
                                     c_sig).state;
      FockState lo = coherent_state(alpha, T + 1).state;
      MultiModeState psi = tensor(sig, lo, T).state;
      OutcomeDistribution dist = outcome_distribution(psi);
      double sup = 0.0;
      for (const auto& [l, p] : dist.probs) {
        double x = l / mag;
        double gauss = braunstein_density(x, alpha, Complex(beta, 0.0));
        double err = std::abs(mag * p - gauss);
        sup = std::max(sup, err);
        csv.rows.push_back({format_g17(beta), format_g17(mag), fmt_int(l),
                            format_g17(x), format_g17(p),
                            format_g17(mag * p), format_g17(gauss),
                            format_g17(err)});
      }
      sups.push_back({{"beta", beta}, {"alpha_mag", mag}, {"sup_err", sup}});
      if (!(sup < prev_sup)) monotone = false;
      prev_sup = sup;
    }
  }
  out.csvs["distribution"] = std::move(csv);
  out.metrics = {{"sup_errors", sups}, {"monotone_decreasing", monotone}};
  out.pass = monotone;
  return out;
}

// ------------------------------------------------------------------ collapse

RunOutput run_collapse(const ExperimentConfig& cfg) {
  RunOutput out;
  struct Point {
    double theta, x, mag;
    int l = 0;
    double frob = 0.0;
  };
  std::vector<Point> pts;
  for (double theta : cfg.thetas)
    for (double x : cfg.xs)
      for (double mag : cfg.alpha_mags) pts.push_back({theta, x, mag});

  int mcut = cfg.mode0_cutoff;
  parallel_for(static_cast<int>(pts.size()), cfg.jobs, [&](int i) {
    Point& p = pts[i];
    p.l = scaled_outcome_index(p.x, p.mag, cfg.floor_l);
    int T = cfg.total_cutoff > 0 ? cfg.total_cutoff
                                 : default_coherent_cutoff(p.mag) + mcut;
    CoherentParams alpha{std::polar(p.mag, p.theta)};
    CollapseKernel K = conditional_kernel(p.l, alpha, mcut, T);
    DenseOperator L = limit_kernel(p.theta, p.x, mcut);
    p.frob = (K.matrix - L.m).norm();
  });

  Csv csv{{"theta", "x", "alpha_mag", "l", "frobenius_dist"}, {}};
  bool monotone = true;
  size_t idx = 0;
  json sweeps = json::array();
  for (double theta : cfg.thetas) {
    for (double x : cfg.xs) {
      double prev = std::numeric_limits<double>::infinity();
      json vals = json::array();
      for (size_t k = 0; k < cfg.alpha_mags.size(); ++k, ++idx) {
        const Point& p = pts[idx];
        csv.rows.push_back({format_g17(p.theta), format_g17(p.x),
                            format_g17(p.mag), fmt_int(p.l),
                            format_g17(p.frob)});
        vals.push_back(p.frob);
        if (!(p.frob < prev)) monotone = false;
        prev = p.frob;
      }
      sweeps.push_back({{"theta", theta}, {"x", x}, {"frobenius", vals}});
    }
  }
  out.csvs["collapse"] = std::move(csv);
  out.metrics = {{"sweeps", sweeps}, {"monotone_decreasing", monotone}};
  out.pass = monotone;
  return out;
}

// --------------------------------------------------------------------- pitop

RunOutput run_pitop(const ExperimentConfig& cfg) {
  RunOutput out;
  double beta = cfg.betas.front();
  int c0 = std::max(default_coherent_cutoff(std::abs(beta)), 40);
  std::vector<double> dists(cfg.alpha_mags.size());
  parallel_for(static_cast<int>(cfg.alpha_mags.size()), cfg.jobs, [&](int i) {
    double mag = cfg.alpha_mags[i];
    int T = cfg.total_cutoff > 0 ? cfg.total_cutoff
                                 : default_coherent_cutoff(mag) + c0;
    dists[i] = collapse_distance(Complex(beta, 0.0),
                                 CoherentParams(Complex(mag, 0.0)),
                                 cfg.interval_a, cfg.interval_b, {c0, T});
  });
  Csv csv{{"beta", "alpha_mag", "a", "b", "distance_sq"}, {}};
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cfg.alpha_mags.size(); ++i) {
    csv.rows.push_back({format_g17(beta), format_g17(cfg.alpha_mags[i]),
                        format_g17(cfg.interval_a), format_g17(cfg.interval_b),
                        format_g17(dists[i])});
    if (!(dists[i] < prev)) monotone = false;
    prev = dists[i];
  }
  out.csvs["pitop"] = std::move(csv);
  out.metrics = {{"distances", dists}, {"monotone_decreasing", monotone}};
  out.pass = monotone;
  return out;
}

// --------------------------------------------------------------- asymptotics

RunOutput run_asymptotics(const ExperimentConfig&) {
  RunOutput out;
  Csv csv{{"check", "p1", "p2", "p3", "value", "reference", "ok"}, {}};
  bool pass = true;
  auto row = [&](const std::string& name, double p1, double p2, double p3,
                 double value, double ref, bool ok) {
    csv.rows.push_back({name, format_g17(p1), format_g17(p2), format_g17(p3),
                        format_g17(value), format_g17(ref), ok ? "1" : "0"});
    pass = pass && ok;
  };

  for (double m : {10.0, 100.0, 1000.0, 10000.0})
    for (double lam : {1.0, 2.0, 4.0, 8.0}) {
      PoissonTail t = poisson_tail(m, lam);
      row("chebyshev", m, lam, 0.0, t.tail, t.bound, t.tail <= t.bound);
    }

  double h1 = poisson_head(1000.0, 0.5), h2 = poisson_head(2000.0, 0.5);
  row("poisson_head", 1000.0, 0.5, 0.0, h1, 1e-50, h1 < 1e-50);
  row("poisson_head_mono", 2000.0, 0.5, 0.0, h2, h1, h2 < h1);

  for (double m : {100.0, 1000.0, 10000.0})
    for (double x : {0.5, 1.0, 2.0})
      for (double mu : {0.9, 1.0, 1.1})
        for (int e : {0, 1}) {
          StirlingCheck s = stirling_check(m, x, mu, e, 0);
          row("stirling_ratio", m, x, mu, s.ratio, 1.0, s.ratio <= 1.0);
        }
  StirlingCheck s = stirling_check(10000.0, 1.0, 1.0, 0, 0);
  row("stirling_error", 10000.0, 1.0, 1.0, s.abs_error, 1e-2,
      s.abs_error < 1e-2);

  auto gcos = [](double phi) { return Complex(std::cos(phi), 0.0); };
  double prev = std::numeric_limits<double>::infinity();
  bool dirac_mono = true;
  double dirac_last = 0.0;
  for (double mag : {5.0, 10.0, 20.0}) {
    double err = std::abs(dirac_sequence(gcos, 0.0, mag, 4097) - 1.0);
    dirac_mono = dirac_mono && err < prev;
    prev = err;
    dirac_last = err;
  }
  row("dirac_cos", 20.0, 0.0, 0.0, dirac_last, 1e-2,
      dirac_mono && dirac_last < 1e-2);

  prev = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double mag : {10.0, 100.0, 1000.0}) {
    double err = poly_exp_error(Complex(1.0, 0.5), 0.3, 1.0, mag);
    ok = ok && err < prev;
    prev = err;
    row("poly_exp", mag, 0.3, 1.0, err, prev, true);
  }
  row("poly_exp_mono", 0.0, 0.0, 0.0, ok ? 1.0 : 0.0, 1.0, ok);

  prev = std::numeric_limits<double>::infinity();
  ok = true;
  for (double m : {1e4, 1e5, 1e6}) {
    double err = power_log_error(Complex(1.0, 0.0), Complex(1.0, 0.0), m);
    ok = ok && err < prev;
    prev = err;
    row("power_log", m, 0.0, 0.0, err, prev, true);
  }
  row("power_log_mono", 0.0, 0.0, 0.0, ok ? 1.0 : 0.0, 1.0, ok);

  prev = std::numeric_limits<double>::infinity();
  ok = true;
  double head_last = 0.0;
  for (double mag : {10.0, 20.0, 30.0}) {
    double err = head_truncation_error(Complex(1.0, 0.0), 0.3, 0.0, 1.0, mag);
    ok = ok && err < prev;
    prev = err;
    head_last = err;
  }
  row("head_truncation", 30.0, 0.3, 1.0, head_last, 1e-10,
      ok && head_last < 1e-10);

  LimitCheckResult m6 =
      mainprop_factor_check(Complex(0.5, 0.0), 0.0, 0.0, 1.0, 6.0);
  LimitCheckResult m12 =
      mainprop_factor_check(Complex(0.5, 0.0), 0.0, 0.0, 1.0, 12.0);
  row("mainprop", 6.0, 1.0, 0.0, m6.abs_error, m12.abs_error,
      m12.abs_error < m6.abs_error);

  out.csvs["asymptotics"] = std::move(csv);
  out.metrics = {{"all_ok", pass}};
  out.pass = pass;
  return out;
}

// ------------------------------------------------------------------ teleport

RunOutput run_teleport(const ExperimentConfig& cfg) {
  RunOutput out;
  FockState psi = coherent_state(CoherentParams(Complex(0.3, 0.0)), 20).state;

  Csv ideal{{"q", "fidelity"}, {}};
  bool mono_ideal = true;
  double prev = -1.0;
  std::vector<double> ideal_fids;
  for (double q : cfg.qs) {
    FockState o = ideal_bell_measure(psi, q, 0.0, 0.0, 20);
    double f = teleport_fidelity(o, psi, Complex(0.0, 0.0));
    ideal.rows.push_back({format_g17(q), format_g17(f)});
    ideal_fids.push_back(f);
    if (!(f > prev)) mono_ideal = false;
    prev = f;
  }
  out.csvs["teleport_ideal"] = std::move(ideal);

  Csv hom{{"lo_mag", "q", "fidelity_to_ideal"}, {}};
  bool mono_hom = true;
  prev = -1.0;
  std::vector<double> hom_fids(cfg.lo_mags.size());
  int T3 = 20;
  FockState ideal_out = ideal_bell_measure(psi, cfg.q, 0.0, 0.0, T3 + 1);
  parallel_for(static_cast<int>(cfg.lo_mags.size()), cfg.jobs, [&](int i) {
    double lo = cfg.lo_mags[i];
    TeleportCutoffs cuts{14, T3, default_coherent_cutoff(lo) + T3 + 1};
    TeleportOutcome o = homodyne_bell_measure(psi, cfg.q, lo, 0, 0, cuts);
    hom_fids[i] = state_fidelity(o.collapsed, ideal_out);
  });
  for (size_t i = 0; i < cfg.lo_mags.size(); ++i) {
    hom.rows.push_back({format_g17(cfg.lo_mags[i]), format_g17(cfg.q),
                        format_g17(hom_fids[i])});
    if (!(hom_fids[i] > prev)) mono_hom = false;
    prev = hom_fids[i];
  }
  out.csvs["teleport_homodyne"] = std::move(hom);

  out.metrics = {{"ideal_fidelities", ideal_fids},
                 {"homodyne_fidelities", hom_fids},
                 {"ideal_monotone", mono_ideal},
                 {"homodyne_monotone", mono_hom}};
  out.pass = mono_ideal && mono_hom;
  return out;
}

// -------------------------------------------------------------------- sample

RunOutput run_sample(const ExperimentConfig& cfg) {
  RunOutput out;
  double mag = cfg.sample_alpha_mag;
  int c_sig = std::max(default_coherent_cutoff(std::abs(cfg.sample_beta)), 8);
  int T = cfg.total_cutoff > 0 ? cfg.total_cutoff
                               : default_coherent_cutoff(mag) + c_sig;
  require_truncation_budget(mag, T - c_sig + 2, cfg.truncation_budget);
  FockState sig =
      coherent_state(CoherentParams(Complex(cfg.sample_beta, 0.0)), c_sig)
          .state;
  FockState lo = coherent_state(CoherentParams(Complex(mag, 0.0)), T + 1)
                     .state;
  OutcomeDistribution dist = outcome_distribution(tensor(sig, lo, T).state);

  std::vector<int> draws = sample_outcomes(dist, cfg.n_shots, cfg.seed);
  std::map<int, long long> hist;
  for (int l : draws) ++hist[l];

  Csv csv{{"l", "count", "empirical_freq", "exact_prob"}, {}};
  double mean = 0.0;
  for (const auto& [l, c] : hist) {
    double freq = static_cast<double>(c) / cfg.n_shots;
    csv.rows.push_back({fmt_int(l), fmt_int(c), format_g17(freq),
                        format_g17(dist.probs.count(l)
                                       ? dist.probs.at(l) / dist.total
                                       : 0.0)});
    mean += freq * l;
  }
  out.csvs["sample"] = std::move(csv);
  out.metrics = {{"empirical_mean_l", mean},
                 {"empirical_mean_x", mean / mag},
                 {"n_shots", cfg.n_shots},
                 {"seed", cfg.seed}};
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> sample_outcomes(const OutcomeDistribution& dist,
                                 long long n_shots, unsigned long long seed) {
  if (n_shots < 1) throw std::invalid_argument("sample_outcomes: n_shots < 1");
  std::vector<std::pair<int, double>> cdf;
  double acc = 0.0;
  for (const auto& [l, p] : dist.probs) {  // std::map: ascending l
    acc += p;
    cdf.emplace_back(l, acc);
  }
  if (cdf.empty()) throw std::invalid_argument("sample_outcomes: empty distribution");
  std::mt19937_64 rng(seed);
  std::vector<int> draws;
  draws.reserve(n_shots);
  for (long long s = 0; s < n_shots; ++s) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::lower_bound(
        cdf.begin(), cdf.end(), u,
        [](const std::pair<int, double>& e, double val) { return e.second < val; });
    if (it == cdf.end()) --it;
    draws.push_back(it->first);
  }
  return draws;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();

  RunOutput result;
  switch (cfg.kind) {
    case ExperimentKind::structural: result = run_structural(cfg); break;
    case ExperimentKind::distribution: result = run_distribution(cfg); break;
    case ExperimentKind::collapse: result = run_collapse(cfg); break;
    case ExperimentKind::pitop: result = run_pitop(cfg); break;
    case ExperimentKind::asymptotics: result = run_asymptotics(cfg); break;
    case ExperimentKind::teleport: result = run_teleport(cfg); break;
    case ExperimentKind::sample: result = run_sample(cfg); break;
  }

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();

  json manifest;
  manifest["experiment"] = to_string(cfg.kind);
  manifest["config"] = config_json(cfg);
  json columns = json::object();
  for (const auto& [name, csv] : result.csvs) columns[name] = csv.columns;
  manifest["columns"] = columns;
  manifest["metrics"] = result.metrics;
  manifest["pass"] = result.pass;
  manifest["version"] = "0.1.0";
  manifest["wall_time_ms"] = elapsed;

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  for (const auto& [name, csv] : result.csvs) {
    std::ofstream f(fs::path(cfg.output_dir) / (name + ".csv"),
                    std::ios::binary);
    f.exceptions(std::ios::failbit | std::ios::badbit);
    f << csv.render();
  }
  {
    std::ofstream f(fs::path(cfg.output_dir) / "manifest.json",
                    std::ios::binary);
    f.exceptions(std::ios::failbit | std::ios::badbit);
    f << manifest.dump(2) << "\n";
  }

  log << to_string(cfg.kind) << ": " << (result.pass ? "pass" : "FAIL")
      << " (" << elapsed << " ms, outputs in " << cfg.output_dir << ")\n";
  return result.pass ? 0 : 1;
}

}  // namespace fockbench
