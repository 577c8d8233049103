#pragma once

#include <string>
#include <vector>

#include "henonlab/mesh.hpp"
#include "henonlab/model.hpp"
#include "henonlab/solver.hpp"

// Large-alpha measurements: alpha sweeps, power-law fits of the blow-up and
// energy rates, the boundary gap law alpha(1 - r_alpha), normalized-quotient
// convergence to the half-space constants, and the rescaled-profile
// comparison against the half-space minimizer.

namespace henonlab::asymptotics {

struct SweepRecord {
    double alpha = 0.0;
    double quotient = 0.0;   // minimized Rayleigh value on the solve grid
    double energy = 0.0;     // gradient energy of the PDE-normalized solution
    double max_value = 0.0;  // max of the ORIGINAL problem's solution
    double max_rho = 0.0;    // radial node of the max on the solve grid
    double r_alpha = 0.0;    // max radius in original coordinates
    double alpha_gap = 0.0;  // alpha * (1 - r_alpha)
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

struct SweepResult {
    model::ProblemSpec base; // alpha field unused; per-record alpha applies
    model::Exponents exps;
    std::vector<SweepRecord> records;
    std::vector<mesh::Field> solutions; // restricted minimizers per alpha
};

struct GridParams {
    int n_rho = 128;
    int n_sigma = 64;
    double grading = 1.03;
    double pole_grading = 1.0; // angular clustering toward sigma in {0, pi}
};

/// Solves the restricted problem for every alpha (strictly increasing, each
/// admissible). A failing entry is recorded with converged=false and zeroed
/// measurements; the sweep continues.
SweepResult run_sweep(const model::ProblemSpec& base,
                      const std::vector<double>& alphas, const GridParams& gp,
                      const solver::SolverConfig& cfg);

/// Max radius in the coordinates of the original equation. The reduced cases
/// compose unit ball -> radius-1/2 ball -> r = sqrt(2 rho); Hyperplane reads
/// the radial coordinate directly (its max sits on the symmetry axis).
double original_radius_of_max(model::ProblemCase kind, double max_rho_unit);

/// Peak of the original solution; the reduced cases pick up the factor
/// 4^{1/(p-2)} from the half-ball scaling, Hyperplane is verbatim.
double original_max_value(model::ProblemCase kind, double max_value_unit,
                          double p);

struct FitResult {
    std::string quantity;
    double slope = 0.0;
    double intercept = 0.0; // in log-log coordinates
    double r_squared = 0.0;
    double target = 0.0;
    double rel_dev = 0.0; // |slope - target| / |target|
};

/// OLS fit of log(y) against log(alpha). Throws InsufficientData for fewer
/// than two usable (finite, positive) points.
FitResult fit_power_law(const std::string& quantity,
                        const std::vector<double>& alphas,
                        const std::vector<double>& values, double target);

/// The three rate fits of a sweep: max_value ~ alpha^{2/(p-2)},
/// quotient ~ alpha^beta, energy ~ alpha^gamma. Uses converged records only.
std::vector<FitResult> fit_sweep(const SweepResult& sweep);

struct GapLaw {
    std::vector<double> alpha_gap;  // per record
    double spread_top_half = 0.0;   // (max-min)/mean over the top half
    double spread_last_pair = 0.0;  // |a_K - a_{K-1}| / mean of the two
    double ell_estimate = 0.0;      // last value
};

GapLaw gap_law(const SweepResult& sweep);

struct LimitComparison {
    std::vector<double> normalized; // quotient / alpha^beta per record
    double factor = 1.0;            // 1 or 2^{1-2/p} (even hyperplane split)
    double target = 0.0;            // factor * m_{gamma,p}
    std::vector<double> rel_dev;    // |normalized - target| / target
};

/// Which half-space decay rate a case converges to: 1/2 for the two reduced
/// cases, 1 for Hyperplane.
double limit_gamma_for_case(model::ProblemCase kind);

/// Normalized quotients against the case's half-space constant. `lc` must
/// have been solved at limit_gamma_for_case(kind) (ConfigError otherwise).
LimitComparison compare_limit(const SweepResult& sweep,
                              const solver::LimitConstant& lc);

/// Relative H^1-seminorm gap between the blow-up rescaling
///   w_hat(s,t) = alpha^{-2/(p-2)} w_alpha(x(s,t)),  x = z/alpha - pole,
/// sampled on the half-space grid, and the PDE-normalized half-space
/// minimizer. pole_sigma in {0, pi} selects the concentration pole.
double profile_comparison(const mesh::Field& ball_solution, double alpha,
                          double p, double pole_sigma,
                          const solver::LimitConstant& lc);

} // namespace henonlab::asymptotics
