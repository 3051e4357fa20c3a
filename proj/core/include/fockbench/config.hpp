#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockbench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimal TOML subset: `key = value` lines, `#` comments, strings, bools,
// integers, floats, and flat homogeneous arrays. No tables/sections.
struct TomlValue {
  enum class Kind { Bool, Int, Float, String, Array };
  Kind kind = Kind::Bool;
  bool b = false;
  long long i = 0;
  double f = 0.0;
  std::string s;
  std::vector<TomlValue> arr;

  double as_double() const;
};

class TomlTable {
 public:
  static TomlTable parse(const std::string& text);
  static TomlTable parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_double_array(
      const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, TomlValue>& entries() const { return values_; }

 private:
  std::map<std::string, TomlValue> values_;
};

enum class ExperimentKind {
  structural,
  distribution,
  collapse,
  pitop,
  asymptotics,
  teleport,
  sample,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::structural;

  std::vector<double> alpha_mags{2.0, 4.0, 8.0};
  std::vector<double> betas{0.0, 0.5};
  std::vector<double> xs{0.0, 0.5, 1.0};
  std::vector<double> thetas{0.0};
  std::vector<double> qs{0.8, 0.9, 0.95, 0.99};
  std::vector<double> lo_mags{3.0, 6.0, 9.0};
  double q = 0.9;                 // channel parameter for the homodyne sweep
  double interval_a = -1.0;       // pitop interval (a, b]
  double interval_b = 1.0;
  int total_cutoff = 0;           // 0 = derive from the default cutoff rule
  int mode0_cutoff = 6;
  double truncation_budget = 1e-8;
  double tolerance = 1e-10;
  long long n_shots = 1000;
  unsigned long long seed = 1;
  double sample_alpha_mag = 8.0;
  double sample_beta = 0.0;
  std::string output_dir = "out";
  bool floor_l = false;
  int jobs = 1;

  // Parses the file; throws ConfigError on a missing file, a syntax error,
  // an invalid value, or an `experiment` key that contradicts `kind`.
  static ExperimentConfig from_file(const std::string& path,
                                    ExperimentKind kind);
  void validate() const;
};

}  // namespace fockbench
