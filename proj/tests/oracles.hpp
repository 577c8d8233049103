#pragma once

#include <vector>

#include "henonlab/mesh.hpp"
#include "henonlab/solver.hpp"

// Independent reference computations for the tests: the same discrete system
// the production minimizer targets, solved by a completely different route
// (dense LU + fixed-point iteration). Also the dense interior operator,
// rebuilt through apply_laplacian column by column, which cross-checks the
// CSR assembly on the way.

namespace oracles {

/// Dense A with dirichlet_energy(f) = x^T A x on interior unknowns; column k
/// comes from applying the Laplacian to the k-th unit unknown vector.
/// Row-major, A[r][c].
std::vector<std::vector<double>>
dense_operator(const henonlab::mesh::GridPtr& g);

/// Per-unknown aggregated quadrature * weight, from the public API only.
std::vector<double> qh_vector(const henonlab::solver::QuotientProblem& prob);

struct FixedPointResult {
    henonlab::mesh::Field field; ///< PDE-normalized ground state
    double quotient = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Ground state by the inverse iteration  w <- A^{-1}(q h w^{p-1}),
/// renormalized to unit nonlinear mass every step, from a uniform positive
/// start. Dense LU inner solves; stops when the quotient settles to tol.
FixedPointResult
fixed_point_ground_state(const henonlab::solver::QuotientProblem& prob,
                         double tol = 1e-13, int max_iter = 2000);

/// Discrete solution of  -Delta u = rhs  with ZeroOuter data, by dense LU on
/// the interior system A x = q .* rhs. For convergence studies of the
/// operator itself against manufactured solutions.
henonlab::mesh::Field dense_poisson_solve(const henonlab::mesh::GridPtr& g,
                                          const henonlab::mesh::Field& rhs);

} // namespace oracles
