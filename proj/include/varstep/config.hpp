// Flat key-value run configuration. The full schema lives in
// docs/config_schema.txt; unknown keys are rejected.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace varstep::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem;
  std::map<std::string, std::string> params;  // keys without the "param." prefix

  int k = 1;
  int m = 0;        // 0 means default k+2
  double T = 0.0;
  int N = 0;
  std::vector<int> N_list;  // convergence subcommand

  double newton_tol = 1e-12;
  int newton_max_iter = 25;
  int audit_m = 0;  // 0 means default max(m, 8)
  std::string out_dir = "out";
  uint64_t seed = 0;

  bool has_reduction = false;
  int reduce_r = 0;
  uint64_t reduce_seed = 0;
  bool reduce_seed_set = false;
  std::string reduce_basis = "random";  // or "identity"

  int effective_m() const { return m > 0 ? m : k + 2; }
  int effective_audit_m() const { return audit_m > 0 ? audit_m : std::max(effective_m(), 8); }
  uint64_t effective_reduce_seed() const { return reduce_seed_set ? reduce_seed : seed; }
};

enum class Subcommand { run, convergence, reduce };

RunConfig parse_config_file(const std::string& path);

// Range checks per subcommand; throws ConfigError with the offending key.
void validate_config(const RunConfig& cfg, Subcommand cmd);

}  // namespace varstep::io
