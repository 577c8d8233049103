#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "henonlab/asymptotics.hpp"
#include "henonlab/model.hpp"
#include "henonlab/solver.hpp"

// Run configuration parsed from a JSON file. Unknown keys are rejected (they
// are almost always typos); missing keys fall back to the defaults below, so
// a minimal config can be as small as {"case": "partial_henon"}.

namespace henonlab::config {

struct RunConfig {
    model::ProblemSpec spec;            ///< case, m/N, p, alpha (solve)
    std::vector<double> alphas;         ///< sweep schedule (strictly increasing)
    asymptotics::GridParams grid;       ///< ball discretization
    solver::SolverConfig solver;        ///< minimizer controls
    solver::LimitBox box;               ///< half-space truncation for `limit`
    double limit_gamma = 0.5;           ///< weight decay rate for `limit`
    int limit_n = 3;                    ///< half-space dimension for `limit`
    double truncation_threshold = 0.01; ///< max accepted box-doubling change
    std::string output_dir = "out";
    std::string sweep_csv;              ///< input table for `fit`
    int reduce_m = 2;                   ///< pair count for `reduce-check`
    std::vector<double> reduce_h = {0.02, 0.01, 0.005, 0.0025};

    std::uint64_t config_hash = 0; ///< FNV-1a of the config file bytes
};

/// Parses `path`; throws Error(ConfigError) with a line-accurate message on
/// malformed JSON, unknown keys, or out-of-domain values.
RunConfig load_config(const std::string& path);

/// Parses an in-memory JSON document (used by load_config and tests).
RunConfig parse_config(const std::string& json_text, const std::string& origin);

} // namespace henonlab::config
