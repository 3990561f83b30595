#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entroflow/diagnostics.hpp"

namespace entroflow {

struct HarnessOptions {
    std::string out_dir;                 // overrides the config's output directory
    std::optional<std::uint64_t> seed;   // overrides the config's seed
    int threads = 1;                     // sweep worker pool size
};

// Exit codes: 0 ok, 2 config error, 3 enumeration cap exceeded, 4 numeric
// failure during the run. No output files are written on exit 2 or 3.
int cmd_run(const std::string& config_path, const HarnessOptions& opts);

// Cartesian parameter grid over a base config; aggregate CSV keyed by the
// grid parameters. Failed runs are marked in their row; exit 0 as long as at
// least one run succeeded (or the grid is empty).
int cmd_sweep(const std::string& config_path, const HarnessOptions& opts);

// Brute-force / closed-form reference values, printed in full precision:
//   oracle pressure ising1d <beta> [L]
//   oracle flip-marginal <t>
//   oracle entropy pointmass-vs-uniform <n>
int cmd_oracle(const std::vector<std::string>& args);

std::string format_trace_csv(const EntropyTrace& trace);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace entroflow
