#pragma once

#include <cstdint>
#include <vector>

#include "henonlab/mesh.hpp"
#include "henonlab/model.hpp"
#include "henonlab/reduction.hpp"

// Ground states of  -Delta u = h |u|^{p-2} u  as minimizers of the Rayleigh
// quotient
//
//     R[w] = dirichlet_energy(w) / weighted_lp_pow(w)^{2/p}
//
// over the discrete symmetry class, by projected gradient descent with Armijo
// backtracking. Each step is preconditioned by one inexact Poisson solve
// (conjugate-direction iterations with a radial-line preconditioner), which
// makes the unit step essentially an inverse-power update. The minimizer is
// reported in PDE normalization (Nehari rescaling), where the quotient value
// Q, the gradient energy E and the nonlinear mass P coincide as
// E = P = Q^{p/(p-2)}.

namespace henonlab::solver {

enum class SymmetryClass {
    AxiSym,          // axially symmetric about e_n (the meridian grid itself)
    AxiSymEven,      // additionally even in the axis coordinate (sigma -> pi - sigma)
    DoublySymmetric, // descriptive only: the original 2m-dimensional class
};

enum class SeedKind { AxisBump, UniformCap, RandomNonneg };

struct QuotientProblem {
    mesh::GridPtr grid;
    reduction::Weight weight;
    double p = 3.0;
    SymmetryClass symmetry = SymmetryClass::AxiSym;
};

struct SolverConfig {
    double tol = 1e-6;       // relative PDE residual at which we stop
    int max_iter = 5000;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double cg_tol = 1e-2;    // relative residual drop for the inner solve
    int cg_max_iter = 200;
    std::vector<SeedKind> seeds = {SeedKind::AxisBump, SeedKind::UniformCap,
                                   SeedKind::RandomNonneg};
    std::uint64_t rng_seed = 0x9e3779b97f4a7c15ull;
};

struct SolveReport {
    mesh::Field solution;   // PDE-normalized minimizer, nonnegative
    double quotient = 0.0;  // minimized Rayleigh value
    double energy = 0.0;    // dirichlet_energy(solution)
    double residual = 0.0;  // max |Delta u + h u^{p-1}| / max h u^{p-1}
    double max_value = 0.0;
    mesh::MaxInfo max_info{};
    int iterations = 0;
    bool converged = false;
    std::vector<double> quotient_trace; // value after every accepted step
};

/// Rayleigh value of an arbitrary admissible field (scale invariant).
/// Throws DegenerateInit when the weighted mass vanishes.
double quotient_value(const QuotientProblem& prob, const mesh::Field& f);

/// Deterministic initial guesses. The bump sits on the concentration axis the
/// weight prefers (sigma = pi for the partial weight, sigma = 0 otherwise,
/// both poles for the even class); RandomNonneg draws from rng_seed.
mesh::Field make_seed(const QuotientProblem& prob, SeedKind kind,
                      std::uint64_t rng_seed);

/// Single minimization from a given start. Throws DegenerateInit if the
/// projected start has no mass; a non-converged run comes back with
/// converged = false rather than throwing.
SolveReport minimize_quotient(const QuotientProblem& prob,
                              const mesh::Field& init, const SolverConfig& cfg);

/// Multi-start wrapper: runs every seed in cfg.seeds, keeps the lowest
/// quotient (preferring converged runs).
SolveReport solve_ground_state(const QuotientProblem& prob,
                               const SolverConfig& cfg);

/// Symmetric-class problem for a case on its solve grid (unit ball):
/// the partial weight for PartialHenon, |z|^{(alpha-2)/2} for FullHenon,
/// |z_N|^alpha with evenness for Hyperplane.
QuotientProblem restricted_problem(const model::ProblemSpec& spec,
                                   const mesh::GridPtr& grid);

/// The unrestricted competitor on the same grid: |z|^{(alpha-2)/2} for the
/// reduced cases, |z|^alpha for Hyperplane, plain axial symmetry.
QuotientProblem unrestricted_problem(const model::ProblemSpec& spec,
                                     const mesh::GridPtr& grid);

/// lambda * f with lambda^{p-2} = E(f)/P(f): turns a quotient critical point
/// into a PDE solution.
mesh::Field nehari_rescale(const QuotientProblem& prob, const mesh::Field& f);

/// Relative PDE residual of a field (0 for the zero field by convention).
double pde_residual(const QuotientProblem& prob, const mesh::Field& f);

/// Transfers a unit-ball solution w to the radius-1/2 ball:
/// v(z) = 4^{1/(p-2)} w(2z), node-exact (the half grid reuses the layout).
mesh::Field rescale_to_half_unit_ball(const mesh::Field& w, double p);

// --------------------------------------------------------------------------
// Half-space limit problem:
//   m_{gamma,p} = inf { E(w) : w on R^n_+, integral e^{-gamma t} |w|^p = 1 }.

struct LimitBox {
    double s_max = 12.0;
    double t_max = 24.0;
    int n_s = 96;
    int n_t = 192;
};

struct LimitConstant {
    double gamma = 0.5;
    double p = 3.0;
    int n = 3;
    double value = 0.0;          // m_{gamma,p}, meridian-normalized
    double value_doubled = 0.0;  // same on the doubled box (same spacing)
    double truncation_rel_change = 0.0;
    SolveReport report;          // minimizer on the base box
};

/// Solves on the box and on its doubling (same spacing) to expose the
/// truncation error. Scaling identity available for checks:
/// m_{gamma,p} = gamma^{2 - n + 2n/p} m_{1,p}.
LimitConstant solve_limit_constant(int n, double p, double gamma,
                                   const LimitBox& box, const SolverConfig& cfg);

/// gamma^{2 - n + 2n/p}, the exact scaling factor above.
double limit_gamma_scaling(int n, double p, double gamma);

// --------------------------------------------------------------------------
// Structure diagnostics (all return a max violation relative to the field
// max; exact-zero means the property holds on the grid).

/// Half-space grids: worst increase along s at fixed t (the minimizer should
/// decay away from the axis, so any positive jump is a violation).
double monotone_s_violation(const mesh::Field& f);

/// Ball grids: increase of f with angular distance from the concentration
/// pole at fixed rho. pole_sigma must be 0 or pi; the even class checks both
/// halves toward their respective poles.
double monotone_polar_violation(const mesh::Field& f, double pole_sigma,
                                bool even_class);

/// Max |f(i,j) - f(i, n2-1-j)|, absolute.
double evenness_violation(const mesh::Field& f);

} // namespace henonlab::solver
