// Timing comparison of the OpenMP kernels against their serial reference
// twins on a production-size ball grid. Prints one row per kernel:
// name, serial ms, parallel ms, speedup, |difference|.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "henonlab/kernels.hpp"
#include "henonlab/mesh.hpp"

namespace hk = henonlab::kernels;
namespace hm = henonlab::mesh;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(int reps, F&& body) {
    body(); // warm up
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) body();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms, double diff) {
    std::printf("%-18s %10.3f %10.3f %8.2fx %10.2e\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, diff);
}

} // namespace

int main() {
    const auto grid = hm::build_ball_grid(3, 256, 128, 1.03);
    const std::size_t n = static_cast<std::size_t>(grid->n_dof);
    const int reps = 20;

#ifdef _OPENMP
    std::printf("grid 256x128 (%zu dofs), %d threads\n", n, omp_get_max_threads());
#else
    std::printf("grid 256x128 (%zu dofs), OpenMP off\n", n);
#endif
    std::printf("%-18s %10s %10s %9s %10s\n", "kernel", "serial/ms", "omp/ms",
                "speedup", "maxdiff");

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    std::vector<double> x(n), w(n), y1(n), y2(n);
    for (auto& v : x) v = uni(rng);
    for (auto& v : w) v = uni(rng);

    const double mv_s =
        time_ms(reps, [&] { hk::serial_ref::csr_matvec(grid->stiffness, x, y1); });
    const double mv_p = time_ms(reps, [&] { hk::csr_matvec(grid->stiffness, x, y2); });
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::fabs(y1[i] - y2[i]));
    row("csr_matvec", mv_s, mv_p, d);

    double a = 0, b = 0;
    const double dot_s = time_ms(reps, [&] { a = hk::serial_ref::dot(x, w); });
    const double dot_p = time_ms(reps, [&] { b = hk::dot(x, w); });
    row("dot", dot_s, dot_p, std::fabs(a - b));

    const double wp_s =
        time_ms(reps, [&] { a = hk::serial_ref::weighted_pow_sum(w, x, 3.0); });
    const double wp_p = time_ms(reps, [&] { b = hk::weighted_pow_sum(w, x, 3.0); });
    row("weighted_pow_sum", wp_s, wp_p, std::fabs(a - b));

    auto f = hm::make_field(grid);
    for (int i = 0; i < grid->n1; ++i)
        for (int j = 0; j < grid->n2; ++j) {
            const double rho = grid->c1[static_cast<std::size_t>(i)];
            f.at(i, j) = 1.0 - rho * rho;
        }
    hm::enforce_structure(f);
    const double en_s = time_ms(reps, [&] { a = hm::dirichlet_energy_serial(f); });
    const double en_p = time_ms(reps, [&] { b = hm::dirichlet_energy(f); });
    row("dirichlet_energy", en_s, en_p, std::fabs(a - b));

    return 0;
}
