#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signalscope/machines.hpp"

namespace signalscope::cli {

enum class OutputFormat { Json, Csv };

struct RunConfig {
    std::string command;  // detect | sweep | oracle | plan
    MachineKind kind = MachineKind::Clone;
    std::vector<double> overlaps;
    std::vector<double> epsilons;
    bool epsilon_max = false;  // detect only: pick the exact-machine excess
    double threshold = 1e-9;   // bits
    std::uint64_t seed = 0;
    int restarts = 32;
    int max_iterations = 10000;
    OutputFormat format = OutputFormat::Json;
    std::string output_path;  // empty writes to stdout
};

struct CommandResult {
    int exit_code = 0;
    std::string document;
};

// Accepts a single value "0.5", a range "start:stop:step" (stop inclusive
// when it lands on the grid), or a comma list "0,0.001,0.005"; the result
// must be strictly ascending.
std::vector<double> parse_grid(const std::string& raw);

// 12 significant digits; scientific with a lowercase e below 1e-4 in
// magnitude; NaN prints as "nan" and zero as "0".
std::string format_real(double x);

MachineKind parse_kind(const std::string& name);

// Single (overlap, epsilon) protocol run. Exit 0: no signaling; 2: signaling
// detected; usage errors throw and the caller maps them to exit 1.
CommandResult cmd_detect(const RunConfig& config);

// Full (overlap x epsilon) table, epsilon varying fastest.
CommandResult cmd_sweep(const RunConfig& config);

// Cross-checks the optimal fidelity per overlap against both searches;
// exit 0 only if every pairwise discrepancy stays below 1e-6.
CommandResult cmd_oracle(const RunConfig& config);

// Probe preparation numbers for one overlap.
CommandResult cmd_plan(const RunConfig& config);

}  // namespace signalscope::cli
