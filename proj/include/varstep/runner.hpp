// Experiment driver behind the command-line tool: builds a problem from a
// config, integrates, audits, and writes deterministic CSV artifacts.
#pragma once

#include <string>

#include "varstep/config.hpp"

namespace varstep::cli {

// Exit codes: 0 success, 3 solver failure (partial outputs are flushed with a
// failure marker row). Config errors throw io::ConfigError before any file is
// written; the executable maps them to exit code 2.
int run_command(const io::RunConfig& cfg);
int convergence_command(const io::RunConfig& cfg);
int reduce_command(const io::RunConfig& cfg);

}  // namespace varstep::cli
