#pragma once

#include <cstdint>
#include <string>

// Command implementations behind the CLI. All file output lands in the
// config's output_dir (or the --out override). Exit codes:
//   0  success
//   1  numerical failure (non-convergence, unstable truncation, bad fit data)
//   2  configuration / validation error
//   3  I/O error

namespace henonlab::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct CliOptions {
    std::string config_path;
    std::string out_dir;       ///< overrides config output_dir when non-empty
    bool has_seed = false;
    std::uint64_t seed = 0;    ///< overrides solver rng_seed when has_seed
    bool allow_partial = false;
    int threads = 0;           ///< 0 keeps the OpenMP default
};

/// Ground state for one (case, alpha): report CSV + solution snapshot.
int cmd_solve(const CliOptions& opts);

/// Alpha sweep: sweep CSV, rate fits, gap law and plot data.
int cmd_sweep(const CliOptions& opts);

/// Half-space constant m_{gamma,p} with box-doubling truncation control.
int cmd_limit(const CliOptions& opts);

/// Correspondence residuals of the dimension-reduction identity over the
/// built-in analytic suite (symbolic + finite-difference refinement table).
int cmd_reduce_check(const CliOptions& opts);

/// Re-fits the rate laws from an existing sweep CSV.
int cmd_fit(const CliOptions& opts);

/// Dispatch by subcommand name; unknown names return kExitConfig.
int run_command(const std::string& name, const CliOptions& opts);

} // namespace henonlab::runner
