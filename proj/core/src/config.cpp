#include "fockbench/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fockbench {

double TomlValue::as_double() const {
  if (kind == Kind::Int) return static_cast<double>(i);
  if (kind == Kind::Float) return f;
  throw ConfigError("value is not a number");
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strip a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

TomlValue parse_scalar(const std::string& tok, int line_no) {
  TomlValue v;
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    v.kind = TomlValue::Kind::String;
    v.s = tok.substr(1, tok.size() - 2);
    return v;
  }
  if (tok == "true" || tok == "false") {
    v.kind = TomlValue::Kind::Bool;
    v.b = (tok == "true");
    return v;
  }
  bool looks_int = !tok.empty();
  for (size_t i = 0; i < tok.size(); ++i) {
    char c = tok[i];
    if (i == 0 && (c == '+' || c == '-')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      looks_int = false;
      break;
    }
  }
  try {
    size_t pos = 0;
    if (looks_int) {
      v.kind = TomlValue::Kind::Int;
      v.i = std::stoll(tok, &pos);
    } else {
      v.kind = TomlValue::Kind::Float;
      v.f = std::stod(tok, &pos);
    }
    if (pos != tok.size()) throw std::invalid_argument("trailing garbage");
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": cannot parse value '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split_array_items(const std::string& inner,
                                           int line_no) {
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (char c : inner) {
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string last = trim(cur);
  if (!last.empty()) items.push_back(last);
  if (in_str)
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": unterminated string");
  return items;
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
  TomlTable t;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    if (t.values_.count(key))
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    if (val.front() == '[') {
      if (val.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated array");
      TomlValue arr;
      arr.kind = TomlValue::Kind::Array;
      for (const std::string& item :
           split_array_items(val.substr(1, val.size() - 2), line_no))
        arr.arr.push_back(parse_scalar(item, line_no));
      t.values_[key] = std::move(arr);
    } else {
      t.values_[key] = parse_scalar(val, line_no);
    }
  }
  return t;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

double TomlTable::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return it->second.as_double();
}

long long TomlTable::get_int(const std::string& key, long long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::Int)
    throw ConfigError("key '" + key + "' is not an integer");
  return it->second.i;
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::Bool)
    throw ConfigError("key '" + key + "' is not a boolean");
  return it->second.b;
}

std::string TomlTable::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::String)
    throw ConfigError("key '" + key + "' is not a string");
  return it->second.s;
}

std::vector<double> TomlTable::get_double_array(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::Array)
    throw ConfigError("key '" + key + "' is not an array");
  std::vector<double> out;
  for (const TomlValue& v : it->second.arr) out.push_back(v.as_double());
  return out;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::structural: return "structural";
    case ExperimentKind::distribution: return "distribution";
    case ExperimentKind::collapse: return "collapse";
    case ExperimentKind::pitop: return "pitop";
    case ExperimentKind::asymptotics: return "asymptotics";
    case ExperimentKind::teleport: return "teleport";
    case ExperimentKind::sample: return "sample";
  }
  throw ConfigError("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::structural, ExperimentKind::distribution,
        ExperimentKind::collapse, ExperimentKind::pitop,
        ExperimentKind::asymptotics, ExperimentKind::teleport,
        ExperimentKind::sample}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             ExperimentKind kind) {
  TomlTable t = TomlTable::parse_file(path);
  ExperimentConfig c;
  c.kind = kind;
  if (t.has("experiment") &&
      experiment_kind_from_string(t.get_string("experiment", "")) != kind)
    throw ConfigError("config experiment key does not match subcommand");
  c.alpha_mags = t.get_double_array("alpha_mags", c.alpha_mags);
  c.betas = t.get_double_array("betas", c.betas);
  c.xs = t.get_double_array("xs", c.xs);
  c.thetas = t.get_double_array("thetas", c.thetas);
  c.qs = t.get_double_array("qs", c.qs);
  c.lo_mags = t.get_double_array("lo_mags", c.lo_mags);
  c.q = t.get_double("q", c.q);
  c.interval_a = t.get_double("interval_a", c.interval_a);
  c.interval_b = t.get_double("interval_b", c.interval_b);
  c.total_cutoff = static_cast<int>(t.get_int("total_cutoff", c.total_cutoff));
  c.mode0_cutoff = static_cast<int>(t.get_int("mode0_cutoff", c.mode0_cutoff));
  c.truncation_budget = t.get_double("truncation_budget", c.truncation_budget);
  c.tolerance = t.get_double("tolerance", c.tolerance);
  c.n_shots = t.get_int("n_shots", c.n_shots);
  c.seed = static_cast<unsigned long long>(t.get_int("seed", 1));
  c.sample_alpha_mag = t.get_double("sample_alpha_mag", c.sample_alpha_mag);
  c.sample_beta = t.get_double("sample_beta", c.sample_beta);
  c.output_dir = t.get_string("output_dir", c.output_dir);
  c.floor_l = t.get_bool("floor_l", c.floor_l);
  c.jobs = static_cast<int>(t.get_int("jobs", c.jobs));
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  auto nonempty = [](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ConfigError(std::string(name) + " must be non-empty");
  };
  nonempty(alpha_mags, "alpha_mags");
  nonempty(betas, "betas");
  nonempty(xs, "xs");
  nonempty(thetas, "thetas");
  nonempty(qs, "qs");
  nonempty(lo_mags, "lo_mags");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  if (!(truncation_budget > 0.0))
    throw ConfigError("truncation_budget must be > 0");
  if (!(interval_a < interval_b))
    throw ConfigError("interval_a must be < interval_b");
  if (n_shots < 1) throw ConfigError("n_shots must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (total_cutoff < 0) throw ConfigError("total_cutoff must be >= 0");
  if (mode0_cutoff < 1) throw ConfigError("mode0_cutoff must be >= 1");
  for (double m : alpha_mags)
    if (!(m >= 0.0)) throw ConfigError("alpha_mags entries must be >= 0");
  for (double v : qs)
    if (!(std::abs(v) < 1.0)) throw ConfigError("qs entries must satisfy |q| < 1");
  if (!(std::abs(q) < 1.0)) throw ConfigError("q must satisfy |q| < 1");
  for (double v : lo_mags)
    if (!(v > 0.0)) throw ConfigError("lo_mags entries must be > 0");
}

}  // namespace fockbench
