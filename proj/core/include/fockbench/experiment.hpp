#pragma once

#include <iosfwd>
#include <vector>

#include "fockbench/config.hpp"
#include "fockbench/homodyne.hpp"

namespace fockbench {

// 17-significant-digit decimal rendering used by all CSV output.
std::string format_g17(double v);

// i.i.d. draws from the exact distribution via inverse CDF over ascending l;
// identical seed -> identical draws.
std::vector<int> sample_outcomes(const OutcomeDistribution& dist,
                                 long long n_shots, unsigned long long seed);

// Runs the configured experiment and writes its CSV files plus
// manifest.json into cfg.output_dir. All results are computed before any
// file is written, so failed runs leave no partial outputs.
//
// Returns 0 on success and 1 on a tolerance/monotonicity failure. Throws
// ConfigError (parse/validation), PrecisionError (truncation budget), and
// filesystem/stream exceptions (I/O).
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace fockbench
