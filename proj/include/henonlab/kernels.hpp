#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "henonlab/mesh.hpp"

// Hot loops, OpenMP-parallel, with a plain serial reference implementation
// kept side by side for testing and benchmarking (see bench_kernels).
//
// Reductions use fixed-size chunks whose partial sums are combined in index
// order, so the result is bitwise identical for any thread count (including
// the no-OpenMP build). The `serial_ref` versions are straight loops: same
// math, different summation order, equal to the product path only up to
// rounding. Matvec rows are independent, so the product path is bitwise
// reproducible there without any chunking.

namespace henonlab::kernels {

inline constexpr std::size_t kChunk = 2048;

/// sum_{k<n} term(k) with fixed chunking; bitwise reproducible for any
/// thread count. Building block for every reduction below.
template <class F>
double chunked_sum(std::size_t n, F&& term) {
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(n, lo + kChunk);
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += term(k);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

/// |x|^p with fast paths for the common small integer powers.
inline double pow_abs(double x, double p) {
    const double a = x < 0 ? -x : x;
    if (p == 2.0) return a * a;
    if (p == 3.0) return a * a * a;
    if (p == 4.0) { const double b = a * a; return b * b; }
    return std::pow(a, p);
}

/// y = A x (CSR). Parallel over rows.
void csr_matvec(const mesh::Csr& a, const std::vector<double>& x,
                std::vector<double>& y);

/// sum_i x_i y_i, deterministic chunked reduction.
double dot(const std::vector<double>& x, const std::vector<double>& y);

/// sum_i w_i x_i y_i.
double dot3(const std::vector<double>& w, const std::vector<double>& x,
            const std::vector<double>& y);

/// sum_i w_i |x_i|^p  (w already carries quadrature*weight).
double weighted_pow_sum(const std::vector<double>& w,
                        const std::vector<double>& x, double p);

/// y += a * x
void axpy(double a, const std::vector<double>& x, std::vector<double>& y);

/// x *= a
void scale(double a, std::vector<double>& x);

/// Batched Thomas solves for the radial-line preconditioner. Lines are
/// contiguous dof ranges; the factorization (c_prime, d_scale) is
/// precomputed once per grid. Parallel over lines.
struct TridiagBatch {
    std::vector<std::pair<int, int>> lines; // {first, length}
    std::vector<double> lower, diag, upper; // per-dof coefficients
    std::vector<double> cp;                 // factored upper/denominator
    std::vector<double> dinv;               // factored 1/denominator
    void factor();
    void solve(const std::vector<double>& rhs, std::vector<double>& x) const;
};

/// Extracts the radial-line tridiagonal part of the stiffness matrix
/// (full diagonal; off-diagonals only within a line).
TridiagBatch build_line_preconditioner(const mesh::MeridianGrid& g);

namespace serial_ref {
void csr_matvec(const mesh::Csr& a, const std::vector<double>& x,
                std::vector<double>& y);
double dot(const std::vector<double>& x, const std::vector<double>& y);
double dot3(const std::vector<double>& w, const std::vector<double>& x,
            const std::vector<double>& y);
double weighted_pow_sum(const std::vector<double>& w,
                        const std::vector<double>& x, double p);
void axpy(double a, const std::vector<double>& x, std::vector<double>& y);
} // namespace serial_ref

} // namespace henonlab::kernels
