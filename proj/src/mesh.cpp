#include "henonlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "henonlab/errors.hpp"
#include "henonlab/kernels.hpp"

namespace henonlab::mesh {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (b^k - a^k)/k, the exact integral of x^{k-1} over [a,b]
double power_cell(double a, double b, int k) {
    return (std::pow(b, k) - std::pow(a, k)) / k;
}

// exact antiderivative of sin^k on [0,x] via the standard recurrence
double sin_pow_integral(int k, double x) {
    if (k == 0) return x;
    if (k == 1) return 1.0 - std::cos(x);
    const double s = std::sin(x), c = std::cos(x);
    return (-std::pow(s, k - 1) * c + (k - 1) * sin_pow_integral(k - 2, x)) / k;
}

struct Builder {
    MeridianGrid g;

    void finish_common() {
        const int n1 = g.n1, n2 = g.n2;
        // dof numbering with radial lines contiguous: see lines below
        g.node_to_dof.assign(n1 * n2, -1);
        g.dof_to_node.clear();
        g.lines.clear();

        if (g.kind == DomainKind::BallPolar) {
            g.has_center = true;
            g.dof_to_node.push_back(g.idx(0, 0));
            for (int j = 0; j < n2; ++j) g.node_to_dof[g.idx(0, j)] = 0;
            g.lines.push_back({0, 1});
            for (int j = 0; j < n2; ++j) {
                const int first = static_cast<int>(g.dof_to_node.size());
                for (int i = 1; i <= n1 - 2; ++i) {
                    g.node_to_dof[g.idx(i, j)] = static_cast<int>(g.dof_to_node.size());
                    g.dof_to_node.push_back(g.idx(i, j));
                }
                g.lines.push_back({first, n1 - 2});
            }
        } else {
            g.has_center = false;
            for (int j = 1; j <= n2 - 2; ++j) {
                const int first = static_cast<int>(g.dof_to_node.size());
                for (int i = 0; i <= n1 - 2; ++i) {
                    g.node_to_dof[g.idx(i, j)] = static_cast<int>(g.dof_to_node.size());
                    g.dof_to_node.push_back(g.idx(i, j));
                }
                g.lines.push_back({first, n1 - 1});
            }
        }
        g.n_dof = static_cast<int>(g.dof_to_node.size());

        // q per unknown; the center accumulates its whole polar cap
        g.q_dof.assign(g.n_dof, 0.0);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                const int d = g.node_to_dof[g.idx(i, j)];
                if (d >= 0) g.q_dof[d] += g.q_node[g.idx(i, j)];
            }

        assemble();
    }

    void assemble() {
        const int n1 = g.n1, n2 = g.n2;
        std::vector<std::vector<std::pair<int, double>>> rows(g.n_dof);
        auto add = [&rows](int a, int b, double c) {
            // edge between nodes with dofs a, b (either may be Dirichlet = -1)
            if (a >= 0) rows[a].push_back({a, c});
            if (b >= 0) rows[b].push_back({b, c});
            if (a >= 0 && b >= 0 && a != b) {
                rows[a].push_back({b, -c});
                rows[b].push_back({a, -c});
            }
        };
        for (int i = 0; i + 1 < n1; ++i)
            for (int j = 0; j < n2; ++j)
                add(g.node_to_dof[g.idx(i, j)], g.node_to_dof[g.idx(i + 1, j)],
                    g.c_rad[i * n2 + j]);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j + 1 < n2; ++j) {
                const double c = g.c_ang[i * (n2 - 1) + j];
                if (c != 0.0)
                    add(g.node_to_dof[g.idx(i, j)], g.node_to_dof[g.idx(i, j + 1)], c);
            }

        g.stiffness.row_ptr.assign(g.n_dof + 1, 0);
        g.stiffness.col.clear();
        g.stiffness.val.clear();
        for (int d = 0; d < g.n_dof; ++d) {
            auto& r = rows[d];
            std::sort(r.begin(), r.end());
            g.stiffness.row_ptr[d + 1] = g.stiffness.row_ptr[d];
            for (std::size_t k = 0; k < r.size();) {
                double v = 0.0;
                std::size_t k2 = k;
                while (k2 < r.size() && r[k2].first == r[k].first) v += r[k2++].second;
                g.stiffness.col.push_back(r[k].first);
                g.stiffness.val.push_back(v);
                ++g.stiffness.row_ptr[d + 1];
                k = k2;
            }
        }
    }
};

} // namespace

GridPtr build_ball_grid(int n_dim, int n_rho, int n_sigma, double grading,
                        double pole_grading, double radius) {
    if (n_dim < 3) throw Error(ErrorKind::BadDimension, "need dimension >= 3");
    if (n_rho < 4 || n_sigma < 4)
        throw Error(ErrorKind::ConfigError, "grid needs at least 4 nodes per side");
    if (!(grading >= 1.0))
        throw Error(ErrorKind::ConfigError, "grading must be >= 1");
    if (!(pole_grading >= 1.0))
        throw Error(ErrorKind::ConfigError, "pole_grading must be >= 1");
    if (!(radius > 0.0)) throw Error(ErrorKind::ConfigError, "radius must be > 0");

    Builder b;
    MeridianGrid& g = b.g;
    g.kind = DomainKind::BallPolar;
    g.n = n_dim;
    g.n1 = n_rho;
    g.n2 = n_sigma;
    g.grading = grading;
    g.pole_grading = pole_grading;
    g.radius = radius;
    g.s_max = g.t_max = 0.0;

    // radial spacings form a geometric sequence, finest at the rim
    const int K = n_rho - 1;
    std::vector<double> h(K);
    if (grading == 1.0) {
        std::fill(h.begin(), h.end(), radius / K);
    } else {
        const double h_last = radius * (grading - 1.0) / (std::pow(grading, K) - 1.0);
        for (int k = 0; k < K; ++k) h[k] = h_last * std::pow(grading, K - 1 - k);
    }
    g.c1.assign(n_rho, 0.0);
    for (int i = 1; i < n_rho; ++i) g.c1[i] = g.c1[i - 1] + h[i - 1];
    g.c1[n_rho - 1] = radius; // kill accumulated rounding at the rim

    // angular spacings grow geometrically from both poles toward the middle;
    // the upper half is reflected so node symmetry c2[n2-1-j] = pi - c2[j]
    // holds exactly, not just up to summation rounding
    g.c2.assign(n_sigma, 0.0);
    const int M = n_sigma - 1;
    if (pole_grading == 1.0) {
        for (int j = 0; j < n_sigma; ++j) g.c2[j] = kPi * j / M;
    } else {
        std::vector<double> e(M);
        double sum = 0.0;
        for (int k = 0; k < M; ++k)
            sum += (e[k] = std::pow(pole_grading, std::min(k, M - 1 - k)));
        const double d0 = kPi / sum;
        for (int j = 1; j <= M / 2; ++j) g.c2[j] = g.c2[j - 1] + d0 * e[j - 1];
        if (n_sigma % 2 == 1) g.c2[M / 2] = 0.5 * kPi;
        for (int j = 0; j < n_sigma / 2; ++j) g.c2[M - j] = kPi - g.c2[j];
    }
    g.c2[M] = kPi;

    const int kAng = n_dim - 2;
    std::vector<double> mid1(K), mid2(n_sigma - 1);
    for (int i = 0; i < K; ++i) mid1[i] = 0.5 * (g.c1[i] + g.c1[i + 1]);
    for (int j = 0; j + 1 < n_sigma; ++j) mid2[j] = 0.5 * (g.c2[j] + g.c2[j + 1]);

    auto dual_lo1 = [&](int i) { return i == 0 ? 0.0 : mid1[i - 1]; };
    auto dual_hi1 = [&](int i) { return i == K ? radius : mid1[i]; };
    std::vector<double> rad_dual(n_rho), rad_ang_dual(n_rho), sig_dual(n_sigma);
    for (int i = 0; i < n_rho; ++i) {
        rad_dual[i] = power_cell(dual_lo1(i), dual_hi1(i), n_dim);
        rad_ang_dual[i] = power_cell(dual_lo1(i), dual_hi1(i), n_dim - 2);
    }
    for (int j = 0; j < n_sigma; ++j) {
        const double lo = j == 0 ? 0.0 : mid2[j - 1];
        const double hi = j == n_sigma - 1 ? kPi : mid2[j];
        sig_dual[j] = sin_pow_integral(kAng, hi) - sin_pow_integral(kAng, lo);
    }

    g.q_node.assign(n_rho * n_sigma, 0.0);
    for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_sigma; ++j)
            g.q_node[g.idx(i, j)] = rad_dual[i] * sig_dual[j];
    g.total_measure = std::accumulate(g.q_node.begin(), g.q_node.end(), 0.0);

    g.c_rad.assign(K * n_sigma, 0.0);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < n_sigma; ++j)
            g.c_rad[i * n_sigma + j] =
                std::pow(mid1[i], n_dim - 1) * sig_dual[j] / (g.c1[i + 1] - g.c1[i]);

    g.c_ang.assign(n_rho * (n_sigma - 1), 0.0);
    for (int i = 1; i < n_rho; ++i) // center row stays 0: one point, no edges
        for (int j = 0; j + 1 < n_sigma; ++j)
            g.c_ang[i * (n_sigma - 1) + j] =
                rad_ang_dual[i] * std::pow(std::sin(mid2[j]), kAng) /
                (g.c2[j + 1] - g.c2[j]);

    b.finish_common();
    return std::make_shared<MeridianGrid>(std::move(b.g));
}

GridPtr build_halfspace_grid(int n_dim, int n_s, int n_t, double s_max,
                             double t_max) {
    if (n_dim < 3) throw Error(ErrorKind::BadDimension, "need dimension >= 3");
    if (n_s < 4 || n_t < 4)
        throw Error(ErrorKind::ConfigError, "grid needs at least 4 nodes per side");
    if (!(s_max > 0.0) || !(t_max > 0.0))
        throw Error(ErrorKind::ConfigError, "box extents must be positive");

    Builder b;
    MeridianGrid& g = b.g;
    g.kind = DomainKind::HalfSpaceBox;
    g.n = n_dim;
    g.n1 = n_s;
    g.n2 = n_t;
    g.grading = 1.0;
    g.pole_grading = 1.0;
    g.radius = 0.0;
    g.s_max = s_max;
    g.t_max = t_max;

    g.c1.assign(n_s, 0.0);
    for (int i = 0; i < n_s; ++i) g.c1[i] = s_max * i / (n_s - 1);
    g.c2.assign(n_t, 0.0);
    for (int j = 0; j < n_t; ++j) g.c2[j] = t_max * j / (n_t - 1);

    const double ds = g.c1[1] - g.c1[0], dt = g.c2[1] - g.c2[0];
    std::vector<double> s_dual(n_s), t_dual(n_t);
    for (int i = 0; i < n_s; ++i) {
        const double lo = i == 0 ? 0.0 : g.c1[i] - 0.5 * ds;
        const double hi = i == n_s - 1 ? s_max : g.c1[i] + 0.5 * ds;
        s_dual[i] = power_cell(lo, hi, n_dim - 1); // integral of s^{n-2}
    }
    for (int j = 0; j < n_t; ++j)
        t_dual[j] = (j == 0 || j == n_t - 1) ? 0.5 * dt : dt;

    g.q_node.assign(n_s * n_t, 0.0);
    for (int i = 0; i < n_s; ++i)
        for (int j = 0; j < n_t; ++j) g.q_node[g.idx(i, j)] = s_dual[i] * t_dual[j];
    g.total_measure = std::accumulate(g.q_node.begin(), g.q_node.end(), 0.0);

    g.c_rad.assign((n_s - 1) * n_t, 0.0);
    for (int i = 0; i + 1 < n_s; ++i)
        for (int j = 0; j < n_t; ++j)
            g.c_rad[i * n_t + j] =
                std::pow(g.c1[i] + 0.5 * ds, n_dim - 2) * t_dual[j] / ds;

    g.c_ang.assign(n_s * (n_t - 1), 0.0);
    for (int i = 0; i < n_s; ++i)
        for (int j = 0; j + 1 < n_t; ++j)
            g.c_ang[i * (n_t - 1) + j] = s_dual[i] / dt;

    b.finish_common();
    return std::make_shared<MeridianGrid>(std::move(b.g));
}

Field make_field(const GridPtr& g, FieldTag tag) {
    Field f;
    f.grid = g;
    f.tag = tag;
    f.values.assign(g->n1 * g->n2, 0.0);
    return f;
}

void enforce_structure(Field& f) {
    const MeridianGrid& g = *f.grid;
    if (f.tag == FieldTag::ZeroOuter) {
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                if (g.is_dirichlet_node(i, j)) f.values[g.idx(i, j)] = 0.0;
    }
    if (g.kind == DomainKind::BallPolar) {
        const double c = f.values[g.idx(0, 0)];
        for (int j = 1; j < g.n2; ++j) f.values[g.idx(0, j)] = c;
    }
}

bool structure_ok(const Field& f) {
    const MeridianGrid& g = *f.grid;
    if (f.tag == FieldTag::ZeroOuter) {
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                if (g.is_dirichlet_node(i, j) && f.values[g.idx(i, j)] != 0.0)
                    return false;
    }
    if (g.kind == DomainKind::BallPolar) {
        for (int j = 1; j < g.n2; ++j)
            if (f.values[g.idx(0, j)] != f.values[g.idx(0, 0)]) return false;
    }
    return true;
}

Field apply_laplacian(const Field& f) {
    const MeridianGrid& g = *f.grid;
    if (f.tag != FieldTag::ZeroOuter)
        throw Error(ErrorKind::BoundaryMismatch,
                    "apply_laplacian needs a ZeroOuter field");
    if (!structure_ok(f))
        throw Error(ErrorKind::BoundaryMismatch,
                    "field violates its Dirichlet/center structure");

    std::vector<double> x(g.n_dof), y(g.n_dof);
    gather(g, f.values, x);
    kernels::csr_matvec(g.stiffness, x, y);
    for (int d = 0; d < g.n_dof; ++d) y[d] = -y[d] / g.q_dof[d];

    Field out = make_field(f.grid, FieldTag::ZeroOuter);
    scatter(g, y, out.values);
    return out;
}

double dirichlet_energy(const Field& f) {
    const MeridianGrid& g = *f.grid;
    const int n2 = g.n2;
    const double* v = f.values.data();
    const double rad = kernels::chunked_sum(
        static_cast<std::size_t>(g.n1 - 1) * n2, [&](std::size_t k) {
            const int i = static_cast<int>(k / n2);
            const int j = static_cast<int>(k % n2);
            const double d = v[g.idx(i + 1, j)] - v[g.idx(i, j)];
            return g.c_rad[k] * d * d;
        });
    const double ang = kernels::chunked_sum(
        static_cast<std::size_t>(g.n1) * (n2 - 1), [&](std::size_t k) {
            const int i = static_cast<int>(k / (n2 - 1));
            const int j = static_cast<int>(k % (n2 - 1));
            const double d = v[g.idx(i, j + 1)] - v[g.idx(i, j)];
            return g.c_ang[k] * d * d;
        });
    return rad + ang;
}

double dirichlet_energy_serial(const Field& f) {
    const MeridianGrid& g = *f.grid;
    double acc = 0.0;
    for (int i = 0; i + 1 < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double d = f.at(i + 1, j) - f.at(i, j);
            acc += g.c_rad[static_cast<std::size_t>(i) * g.n2 + j] * d * d;
        }
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j + 1 < g.n2; ++j) {
            const double d = f.at(i, j + 1) - f.at(i, j);
            acc += g.c_ang[static_cast<std::size_t>(i) * (g.n2 - 1) + j] * d * d;
        }
    return acc;
}

double integral(const Field& f) {
    return kernels::dot(f.grid->q_node, f.values);
}

std::vector<double> weight_table(const MeridianGrid& g, const reduction::Weight& w) {
    std::vector<double> t(g.n1 * g.n2);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            t[g.idx(i, j)] = reduction::eval_weight(w, g.c1[i], g.c2[j]);
    return t;
}

double weighted_lp_pow(const Field& f, const reduction::Weight& w, double p) {
    const MeridianGrid& g = *f.grid;
    std::vector<double> qh = weight_table(g, w);
    for (std::size_t k = 0; k < qh.size(); ++k) qh[k] *= g.q_node[k];
    return kernels::weighted_pow_sum(qh, f.values, p);
}

double weighted_lp_norm(const Field& f, const reduction::Weight& w, double p) {
    return std::pow(weighted_lp_pow(f, w, p), 1.0 / p);
}

MaxInfo field_max(const Field& f) {
    const MeridianGrid& g = *f.grid;
    MaxInfo m{f.values[0], 0, 0, g.c1[0], g.c2[0]};
    if (g.kind == DomainKind::BallPolar) {
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                if (f.at(i, j) > m.value) m = {f.at(i, j), i, j, g.c1[i], g.c2[j]};
    } else {
        for (int j = 0; j < g.n2; ++j) // smallest t wins ties, then smallest s
            for (int i = 0; i < g.n1; ++i)
                if (f.at(i, j) > m.value) m = {f.at(i, j), i, j, g.c1[i], g.c2[j]};
    }
    return m;
}

bool contains(const MeridianGrid& g, double x1, double x2) {
    return x1 >= g.c1.front() && x1 <= g.c1.back() && x2 >= g.c2.front() &&
           x2 <= g.c2.back();
}

double sample_bilinear(const Field& f, double x1, double x2) {
    const MeridianGrid& g = *f.grid;
    if (!contains(g, x1, x2))
        throw Error(ErrorKind::InterpolationOutOfRange,
                    "sample point outside the grid rectangle");
    auto cell = [](const std::vector<double>& c, double x) {
        auto it = std::upper_bound(c.begin(), c.end(), x);
        int k = static_cast<int>(it - c.begin()) - 1;
        k = std::clamp(k, 0, static_cast<int>(c.size()) - 2);
        return k;
    };
    const int i = cell(g.c1, x1), j = cell(g.c2, x2);
    const double a = (x1 - g.c1[i]) / (g.c1[i + 1] - g.c1[i]);
    const double b = (x2 - g.c2[j]) / (g.c2[j + 1] - g.c2[j]);
    return (1 - a) * (1 - b) * f.at(i, j) + a * (1 - b) * f.at(i + 1, j) +
           (1 - a) * b * f.at(i, j + 1) + a * b * f.at(i + 1, j + 1);
}

void gather(const MeridianGrid& g, const std::vector<double>& nodal,
            std::vector<double>& dof) {
    dof.resize(g.n_dof);
    for (int d = 0; d < g.n_dof; ++d) dof[d] = nodal[g.dof_to_node[d]];
}

void scatter(const MeridianGrid& g, const std::vector<double>& dof,
             std::vector<double>& nodal) {
    nodal.assign(g.n1 * g.n2, 0.0);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const int d = g.node_to_dof[g.idx(i, j)];
            if (d >= 0) nodal[g.idx(i, j)] = dof[d];
        }
}

} // namespace henonlab::mesh
