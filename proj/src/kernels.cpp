#include "henonlab/kernels.hpp"

namespace henonlab::kernels {

void csr_matvec(const mesh::Csr& a, const std::vector<double>& x,
                std::vector<double>& y) {
    const int n = a.rows();
    y.resize(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    return chunked_sum(x.size(), [&](std::size_t k) { return x[k] * y[k]; });
}

double dot3(const std::vector<double>& w, const std::vector<double>& x,
            const std::vector<double>& y) {
    return chunked_sum(x.size(),
                       [&](std::size_t k) { return w[k] * x[k] * y[k]; });
}

double weighted_pow_sum(const std::vector<double>& w,
                        const std::vector<double>& x, double p) {
    return chunked_sum(
        x.size(), [&](std::size_t k) { return w[k] * pow_abs(x[k], p); });
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = x.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(n); ++k)
        y[k] += a * x[k];
}

void scale(double a, std::vector<double>& x) {
    const std::size_t n = x.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(n); ++k) x[k] *= a;
}

void TridiagBatch::factor() {
    const std::size_t n = diag.size();
    cp.assign(n, 0.0);
    dinv.assign(n, 0.0);
    for (const auto& [first, len] : lines) {
        double den = diag[first];
        dinv[first] = 1.0 / den;
        cp[first] = upper[first] * dinv[first];
        for (int k = 1; k < len; ++k) {
            const int d = first + k;
            den = diag[d] - lower[d] * cp[d - 1];
            dinv[d] = 1.0 / den;
            cp[d] = upper[d] * dinv[d];
        }
    }
}

void TridiagBatch::solve(const std::vector<double>& rhs,
                         std::vector<double>& x) const {
    x.resize(rhs.size());
    const long long nl = static_cast<long long>(lines.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long li = 0; li < nl; ++li) {
        const auto [first, len] = lines[static_cast<std::size_t>(li)];
        x[first] = rhs[first] * dinv[first];
        for (int k = 1; k < len; ++k) {
            const int d = first + k;
            x[d] = (rhs[d] - lower[d] * x[d - 1]) * dinv[d];
        }
        for (int k = len - 2; k >= 0; --k) {
            const int d = first + k;
            x[d] -= cp[d] * x[d + 1];
        }
    }
}

TridiagBatch build_line_preconditioner(const mesh::MeridianGrid& g) {
    TridiagBatch t;
    t.lines = g.lines;
    const int n = g.n_dof;
    t.lower.assign(n, 0.0);
    t.diag.assign(n, 0.0);
    t.upper.assign(n, 0.0);
    for (const auto& [first, len] : g.lines) {
        for (int k = 0; k < len; ++k) {
            const int d = first + k;
            for (int e = g.stiffness.row_ptr[d]; e < g.stiffness.row_ptr[d + 1]; ++e) {
                const int c = g.stiffness.col[e];
                if (c == d) t.diag[d] = g.stiffness.val[e];
                else if (c == d - 1 && k > 0) t.lower[d] = g.stiffness.val[e];
                else if (c == d + 1 && k + 1 < len) t.upper[d] = g.stiffness.val[e];
            }
        }
    }
    t.factor();
    return t;
}

namespace serial_ref {

void csr_matvec(const mesh::Csr& a, const std::vector<double>& x,
                std::vector<double>& y) {
    const int n = a.rows();
    y.resize(n);
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

double dot3(const std::vector<double>& w, const std::vector<double>& x,
            const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * x[k] * y[k];
    return s;
}

double weighted_pow_sum(const std::vector<double>& w,
                        const std::vector<double>& x, double p) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * pow_abs(x[k], p);
    return s;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

} // namespace serial_ref

} // namespace henonlab::kernels
