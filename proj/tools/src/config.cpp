#include "skclt_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "skclt/error.hpp"
#include "skclt/qsolver.hpp"

namespace skclt::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

template <class T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(items[i]);
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "N",     "N_list", "beta",    "h",    "beta_ceiling", "profile", "alpha", "weights", "engine",
      "M",     "seed",   "jobs",    "sweeps", "burn_in",    "thin",    "batches", "rule",  "spec",
      "rhs",   "path",   "observable", "t_grid", "plan",    "nodes",   "csv",   "json"};
  return keys;
}

class Parser {
 public:
  std::vector<std::string> violations;

  void integer(const std::string& key, const std::string& value, auto& out) {
    if (!parse_number(value, out)) violations.push_back(key + ": expected an integer, got '" + value + "'");
  }

  void real(const std::string& key, const std::string& value, double& out) {
    if (!parse_number(value, out) || !std::isfinite(out)) {
      violations.push_back(key + ": expected a finite number, got '" + value + "'");
    }
  }

  template <class T>
  void list(const std::string& key, const std::string& value, std::vector<T>& out) {
    out.clear();
    for (const auto& item : split_list(value)) {
      T v{};
      if (!parse_number(item, v)) {
        violations.push_back(key + ": bad list entry '" + item + "'");
        continue;
      }
      out.push_back(v);
    }
    if (out.empty()) violations.push_back(key + ": empty list");
  }

  void named(const std::string& key, const std::string& value, const std::function<void(const std::string&)>& fn) {
    try {
      fn(value);
    } catch (const Error& e) {
      violations.push_back(key + ": " + e.what());
    }
  }
};

}  // namespace

ExpectationPlan::Kind parse_plan_kind(const std::string& name) {
  if (name == "quadrature") return ExpectationPlan::Kind::quadrature;
  if (name == "mc" || name == "monte-carlo") return ExpectationPlan::Kind::monte_carlo;
  throw InvalidArgument("unknown plan '" + name + "' (expected quadrature or mc)");
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  Parser p;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.violations.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      p.violations.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      continue;
    }
    if (key != "spec" && !seen.insert(key).second) {
      p.violations.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      continue;
    }
    if (value.empty()) {
      p.violations.push_back(key + ": missing value");
      continue;
    }
    if (key == "N") p.integer(key, value, c.n);
    else if (key == "N_list") p.list(key, value, c.n_list);
    else if (key == "beta") p.real(key, value, c.beta);
    else if (key == "h") p.real(key, value, c.h);
    else if (key == "beta_ceiling") p.real(key, value, c.beta_ceiling);
    else if (key == "profile") p.named(key, value, [&](const std::string& v) { c.profile = parse_weight_profile(v); });
    else if (key == "alpha") p.real(key, value, c.alpha);
    else if (key == "weights") p.list(key, value, c.weights);
    else if (key == "engine") p.named(key, value, [&](const std::string& v) { c.engine = parse_engine(v); });
    else if (key == "M") p.integer(key, value, c.m);
    else if (key == "seed") p.integer(key, value, c.seed);
    else if (key == "jobs") p.integer(key, value, c.jobs);
    else if (key == "sweeps") p.integer(key, value, c.sweeps);
    else if (key == "burn_in") p.integer(key, value, c.burn_in);
    else if (key == "thin") p.integer(key, value, c.thin);
    else if (key == "batches") p.integer(key, value, c.batches);
    else if (key == "rule") p.named(key, value, [&](const std::string& v) { c.rule = parse_update_rule(v); });
    else if (key == "spec") {
      p.named(key, value, [&](const std::string& v) { c.specs.push_back(ReplicaSpec::parse(v).label()); });
    } else if (key == "rhs") p.named(key, value, [&](const std::string& v) { c.rhs = parse_rhs_reading(v); });
    else if (key == "path") p.named(key, value, [&](const std::string& v) { c.path = parse_cavity_path(v); });
    else if (key == "observable") {
      c.observables = split_list(value);
      const auto catalog = observable_catalog();
      for (const auto& name : c.observables) {
        if (std::find(catalog.begin(), catalog.end(), name) == catalog.end()) {
          p.violations.push_back("observable: unknown name '" + name + "'");
        }
      }
    } else if (key == "t_grid") p.list(key, value, c.t_grid);
    else if (key == "plan") p.named(key, value, [&](const std::string& v) { c.plan = parse_plan_kind(v); });
    else if (key == "nodes") p.integer(key, value, c.nodes);
    else if (key == "csv") c.csv = value;
    else if (key == "json") c.json = value;
  }

  auto& v = p.violations;
  auto check_n = [&](int n, const std::string& key) {
    if (n < 1 || n > kEnumerationCeiling) {
      v.push_back(key + ": N = " + std::to_string(n) + " outside 1.." + std::to_string(kEnumerationCeiling));
    }
  };
  if (seen.count("N")) check_n(c.n, "N");
  for (int n : c.n_list) check_n(n, "N_list");
  if (!(c.beta_ceiling > 0.0)) v.push_back("beta_ceiling: must be positive");
  if (c.beta < 0.0) v.push_back("beta: must be >= 0");
  if (c.beta > c.beta_ceiling) {
    v.push_back("beta: " + format_double(c.beta) + " exceeds the high-temperature ceiling " +
                format_double(c.beta_ceiling));
  }
  if (c.profile == WeightProfile::power_law && !(c.alpha > 0.0)) v.push_back("alpha: must be positive");
  if (c.profile == WeightProfile::explicit_values) {
    if (c.weights.empty()) {
      v.push_back("weights: required for the explicit profile");
    } else {
      try {
        (void)WeightVector::explicit_values(c.weights);
      } catch (const Error& e) {
        v.push_back(std::string("weights: ") + e.what());
      }
      for (int n : c.sizes()) {
        if (n != static_cast<int>(c.weights.size())) {
          v.push_back("weights: length " + std::to_string(c.weights.size()) + " does not match N = " +
                      std::to_string(n));
        }
      }
    }
  } else if (!c.weights.empty()) {
    v.push_back("weights: only allowed with profile = explicit");
  }
  if (c.m < 1) v.push_back("M: must be >= 1");
  if (c.jobs < 1) v.push_back("jobs: must be >= 1");
  if (c.thin < 1) v.push_back("thin: must be >= 1");
  if (c.burn_in < 0) v.push_back("burn_in: must be >= 0");
  if (c.sweeps <= c.burn_in) v.push_back("sweeps: must exceed burn_in");
  if (c.batches < 8) v.push_back("batches: must be >= 8");
  for (double t : c.t_grid) {
    if (!(t >= 0.0 && t < 1.0)) v.push_back("t_grid: entries must lie in [0, 1)");
  }
  if (c.nodes < 1 || c.nodes > kMaxQuadratureNodes) {
    v.push_back("nodes: must lie in 1.." + std::to_string(kMaxQuadratureNodes));
  }
  if (!v.empty()) throw ConfigError(v);
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto ints = [](const std::vector<int>& xs) {
    return join<int>(xs, [](const int& x) { return std::to_string(x); });
  };
  auto reals = [](const std::vector<double>& xs) {
    return join<double>(xs, [](const double& x) { return format_double(x); });
  };
  if (c.n != 0) out << "N = " << c.n << '\n';
  if (!c.n_list.empty()) out << "N_list = " << ints(c.n_list) << '\n';
  out << "beta = " << format_double(c.beta) << '\n';
  out << "h = " << format_double(c.h) << '\n';
  out << "beta_ceiling = " << format_double(c.beta_ceiling) << '\n';
  out << "profile = " << to_string(c.profile) << '\n';
  out << "alpha = " << format_double(c.alpha) << '\n';
  if (!c.weights.empty()) out << "weights = " << reals(c.weights) << '\n';
  out << "engine = " << to_string(c.engine) << '\n';
  out << "M = " << c.m << '\n';
  out << "seed = " << c.seed << '\n';
  out << "jobs = " << c.jobs << '\n';
  out << "sweeps = " << c.sweeps << '\n';
  out << "burn_in = " << c.burn_in << '\n';
  out << "thin = " << c.thin << '\n';
  out << "batches = " << c.batches << '\n';
  out << "rule = " << to_string(c.rule) << '\n';
  for (const auto& s : c.specs) out << "spec = " << s << '\n';
  out << "rhs = " << to_string(c.rhs) << '\n';
  out << "path = " << to_string(c.path) << '\n';
  if (!c.observables.empty()) {
    out << "observable = " << join<std::string>(c.observables, [](const std::string& s) { return s; }) << '\n';
  }
  if (!c.t_grid.empty()) out << "t_grid = " << reals(c.t_grid) << '\n';
  out << "plan = " << to_string(c.plan) << '\n';
  out << "nodes = " << c.nodes << '\n';
  if (!c.csv.empty()) out << "csv = " << c.csv << '\n';
  if (!c.json.empty()) out << "json = " << c.json << '\n';
  return out.str();
}

std::vector<int> ExperimentConfig::sizes() const {
  if (!n_list.empty()) return n_list;
  if (n != 0) return {n};
  return {};
}

std::vector<ReplicaSpec> ExperimentConfig::replica_specs() const {
  std::vector<ReplicaSpec> out;
  if (specs.empty()) return {ReplicaSpec::parse("4")};
  for (const auto& s : specs) out.push_back(ReplicaSpec::parse(s));
  return out;
}

std::vector<double> ExperimentConfig::t_values() const {
  if (!t_grid.empty()) return t_grid;
  std::vector<double> out;
  for (int i = 1; i <= 9; ++i) out.push_back(i / 10.0);
  return out;
}

WeightVector ExperimentConfig::weights_for(int n_spins) const {
  if (profile == WeightProfile::explicit_values) {
    if (static_cast<int>(weights.size()) != n_spins) throw DimensionError("explicit weights do not match N");
    return WeightVector::explicit_values(weights);
  }
  return make_weights(profile, n_spins, alpha);
}

DisorderPlan ExperimentConfig::disorder_plan() const {
  DisorderPlan plan;
  plan.n_disorders = m;
  plan.base_seed = seed;
  plan.engine = engine;
  plan.mcmc.schedule = McmcSchedule{sweeps, burn_in, thin};
  plan.mcmc.rule = rule;
  plan.jobs = jobs;
  return plan;
}

ExpectationPlan ExperimentConfig::expectation_plan() const {
  ExpectationPlan plan;
  plan.kind = this->plan;
  plan.coupling_nodes = nodes;
  plan.cavity_nodes = nodes;
  plan.n_disorders = m;
  plan.base_seed = seed;
  plan.jobs = jobs;
  return plan;
}

}  // namespace skclt::cli
