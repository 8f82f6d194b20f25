#include "varstep/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace varstep::io {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_real(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not a number: '" + value + "'");
  }
  if (pos != value.size()) throw ConfigError("config: " + key + " is not a number: '" + value + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  const double v = to_real(key, value);
  const long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v) throw ConfigError("config: " + key + " is not an integer: '" + value + "'");
  return i;
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
    if (!seen.insert(key).second) throw ConfigError("config: duplicate key " + key);

    if (key.rfind("param.", 0) == 0) {
      cfg.params[key.substr(6)] = value;
    } else if (key == "problem") {
      cfg.problem = value;
    } else if (key == "k") {
      cfg.k = static_cast<int>(to_integer(key, value));
    } else if (key == "m") {
      cfg.m = static_cast<int>(to_integer(key, value));
    } else if (key == "T") {
      cfg.T = to_real(key, value);
    } else if (key == "N") {
      cfg.N = static_cast<int>(to_integer(key, value));
    } else if (key == "N_list") {
      std::string rest = value;
      while (!rest.empty()) {
        const size_t comma = rest.find(',');
        const std::string item = trim(rest.substr(0, comma));
        if (item.empty()) throw ConfigError("config: N_list has an empty entry");
        cfg.N_list.push_back(static_cast<int>(to_integer("N_list", item)));
        if (comma == std::string::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key == "newton_tol") {
      cfg.newton_tol = to_real(key, value);
    } else if (key == "newton_max_iter") {
      cfg.newton_max_iter = static_cast<int>(to_integer(key, value));
    } else if (key == "audit_m") {
      cfg.audit_m = static_cast<int>(to_integer(key, value));
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "seed") {
      const long long s = to_integer(key, value);
      if (s < 0) throw ConfigError("config: seed must be non-negative");
      cfg.seed = static_cast<uint64_t>(s);
    } else if (key == "reduce.r") {
      cfg.reduce_r = static_cast<int>(to_integer(key, value));
      cfg.has_reduction = true;
    } else if (key == "reduce.seed") {
      const long long s = to_integer(key, value);
      if (s < 0) throw ConfigError("config: reduce.seed must be non-negative");
      cfg.reduce_seed = static_cast<uint64_t>(s);
      cfg.reduce_seed_set = true;
      cfg.has_reduction = true;
    } else if (key == "reduce.basis") {
      cfg.reduce_basis = value;
      cfg.has_reduction = true;
    } else {
      throw ConfigError("config: unknown key " + key);
    }
  }
  return cfg;
}

void validate_config(const RunConfig& cfg, Subcommand cmd) {
  if (cfg.problem.empty()) throw ConfigError("config: problem is required");
  if (cfg.k < 0 || cfg.k > 8) throw ConfigError("config: k must be in [0, 8]");
  const int m = cfg.effective_m();
  if (m < cfg.k + 1 || m > 20) throw ConfigError("config: m must be in [k+1, 20]");
  const int am = cfg.effective_audit_m();
  if (am < 1 || am > 20) throw ConfigError("config: audit_m must be in [1, 20]");
  if (!(cfg.newton_tol > 0.0) || cfg.newton_tol > 1e-2)
    throw ConfigError("config: newton_tol must be in (0, 1e-2]");
  if (cfg.newton_max_iter < 1 || cfg.newton_max_iter > 1000)
    throw ConfigError("config: newton_max_iter must be in [1, 1000]");
  if (!(cfg.T > 0.0)) throw ConfigError("config: T must be positive");

  if (cmd == Subcommand::convergence) {
    if (cfg.N_list.empty()) throw ConfigError("config: convergence requires N_list");
    for (int n : cfg.N_list)
      if (n < 1 || n > 10000000) throw ConfigError("config: N_list entries must be in [1, 1e7]");
    for (size_t i = 1; i < cfg.N_list.size(); ++i)
      if (cfg.N_list[i] <= cfg.N_list[i - 1]) throw ConfigError("config: N_list must be strictly increasing");
  } else {
    if (cfg.N < 1 || cfg.N > 10000000) throw ConfigError("config: N must be in [1, 1e7]");
  }

  if (cmd == Subcommand::reduce) {
    if (!cfg.has_reduction) throw ConfigError("config: reduce requires a reduce.r block");
    if (cfg.reduce_basis != "random" && cfg.reduce_basis != "identity")
      throw ConfigError("config: reduce.basis must be 'random' or 'identity'");
    if (cfg.reduce_basis == "random" && cfg.reduce_r < 1)
      throw ConfigError("config: reduce.r must be >= 1");
  }
}

}  // namespace varstep::io
