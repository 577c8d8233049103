#include "henonlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "henonlab/errors.hpp"
#include "henonlab/kernels.hpp"

namespace henonlab::solver {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Per-problem solver context on interior unknowns.
struct Work {
    const QuotientProblem& prob;
    const mesh::MeridianGrid& g;
    double p;
    std::vector<double> qh;   // quadrature * weight per dof (center aggregated)
    std::vector<int> even_map; // dof reflection sigma -> pi - sigma, or empty
    kernels::TridiagBatch precond;

    explicit Work(const QuotientProblem& problem)
        : prob(problem), g(*problem.grid), p(problem.p) {
        const auto wt = mesh::weight_table(g, prob.weight);
        qh.assign(g.n_dof, 0.0);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                const int d = g.node_to_dof[g.idx(i, j)];
                if (d >= 0) qh[d] += g.q_node[g.idx(i, j)] * wt[g.idx(i, j)];
            }
        if (prob.symmetry == SymmetryClass::AxiSymEven) {
            if (g.kind != mesh::DomainKind::BallPolar)
                throw Error(ErrorKind::GridMismatch,
                            "even symmetry class needs a ball grid");
            even_map.assign(g.n_dof, 0);
            for (int i = 0; i < g.n1; ++i)
                for (int j = 0; j < g.n2; ++j) {
                    const int d = g.node_to_dof[g.idx(i, j)];
                    if (d >= 0)
                        even_map[d] = g.node_to_dof[g.idx(i, g.n2 - 1 - j)];
                }
        }
        precond = kernels::build_line_preconditioner(g);
    }

    // nonnegativity clamp, then evenness averaging (order keeps both exact)
    void project(std::vector<double>& x) const {
        for (double& v : x)
            if (v < 0.0) v = 0.0;
        if (!even_map.empty()) {
            std::vector<double> y(x.size());
            for (std::size_t d = 0; d < x.size(); ++d)
                y[d] = 0.5 * (x[d] + x[even_map[d]]);
            x.swap(y);
        }
    }

    double pow_mass(const std::vector<double>& x) const {
        return kernels::weighted_pow_sum(qh, x, p);
    }

    // qh * x^{p-1} for nonnegative iterates
    void nonlinear_term(const std::vector<double>& x,
                        std::vector<double>& np) const {
        np.resize(x.size());
        const long long n = static_cast<long long>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long k = 0; k < n; ++k)
            np[k] = qh[k] * kernels::pow_abs(x[k], p - 1.0);
    }

    // relative PDE residual of the Nehari-rescaled iterate, computed from the
    // quotient gradient: with P(x)=1 and lambda = E,
    //   res = max |g_i|/q_i / (lambda * max np_i/q_i)
    double residual_from_gradient(const std::vector<double>& grad,
                                  const std::vector<double>& np,
                                  double lambda) const {
        double num = 0.0, den = 0.0;
        for (int d = 0; d < g.n_dof; ++d) {
            num = std::max(num, std::fabs(grad[d]) / g.q_dof[d]);
            den = std::max(den, np[d] / g.q_dof[d]);
        }
        den *= lambda;
        return den > 0.0 ? num / den : 0.0;
    }
};

void pcg(const mesh::Csr& a, const kernels::TridiagBatch& m,
         const std::vector<double>& b, std::vector<double>& x, double rel_tol,
         int max_iter) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    std::vector<double> r = b, z, pdir, ap;
    const double b2 = kernels::dot(r, r);
    if (b2 == 0.0) return;
    m.solve(r, z);
    pdir = z;
    double rz = kernels::dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        kernels::csr_matvec(a, pdir, ap);
        const double pap = kernels::dot(pdir, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rz / pap;
        kernels::axpy(alpha, pdir, x);
        kernels::axpy(-alpha, ap, r);
        if (kernels::dot(r, r) <= rel_tol * rel_tol * b2) break;
        m.solve(r, z);
        const double rz2 = kernels::dot(r, z);
        const double beta = rz2 / rz;
        rz = rz2;
        for (std::size_t k = 0; k < n; ++k) pdir[k] = z[k] + beta * pdir[k];
    }
}

} // namespace

double quotient_value(const QuotientProblem& prob, const mesh::Field& f) {
    const double mass = mesh::weighted_lp_pow(f, prob.weight, prob.p);
    if (!(mass > 0.0))
        throw Error(ErrorKind::DegenerateInit, "field has no weighted mass");
    return mesh::dirichlet_energy(f) / std::pow(mass, 2.0 / prob.p);
}

mesh::Field make_seed(const QuotientProblem& prob, SeedKind kind,
                      std::uint64_t rng_seed) {
    const mesh::MeridianGrid& g = *prob.grid;
    mesh::Field f = mesh::make_field(prob.grid);
    const bool even = prob.symmetry == SymmetryClass::AxiSymEven;

    if (g.kind == mesh::DomainKind::BallPolar) {
        const double pole =
            prob.weight.kind == reduction::WeightKind::PartialReduced ? kPi : 0.0;
        const double R = g.radius;
        auto bump = [&](double rho, double sig, double pole_sig) {
            const double xs = rho * std::sin(sig);
            const double xa = rho * std::cos(sig) - R * 0.9 * std::cos(pole_sig);
            return std::exp(-(xs * xs + xa * xa) / (2.0 * 0.15 * R * 0.15 * R));
        };
        std::mt19937_64 rng(rng_seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                const double rho = g.c1[i], sig = g.c2[j];
                const double env = 1.0 - (rho / R) * (rho / R);
                double v = 0.0;
                switch (kind) {
                    case SeedKind::AxisBump:
                        v = env * (even ? bump(rho, sig, 0.0) + bump(rho, sig, kPi)
                                        : bump(rho, sig, pole));
                        break;
                    case SeedKind::UniformCap: {
                        const double c = std::cos(sig);
                        const double cap = even ? c * c
                                          : std::max(0.0, pole == 0.0 ? c : -c);
                        v = env * cap * cap;
                        break;
                    }
                    case SeedKind::RandomNonneg:
                        v = env * uni(rng);
                        break;
                }
                f.at(i, j) = v;
            }
    } else {
        std::mt19937_64 rng(rng_seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                const double s = g.c1[i], t = g.c2[j];
                double v = 0.0;
                switch (kind) {
                    case SeedKind::AxisBump:
                        v = t * std::exp(-(s * s + (t - 2.0) * (t - 2.0)) / 3.0);
                        break;
                    case SeedKind::UniformCap: {
                        const double cap = std::max(0.0, 1.0 - s / 6.0);
                        v = t * std::exp(-t / 3.0) * cap * cap;
                        break;
                    }
                    case SeedKind::RandomNonneg:
                        v = std::sin(kPi * t / g.t_max) * (1.0 - s / g.s_max) *
                            uni(rng);
                        break;
                }
                f.at(i, j) = v;
            }
    }
    mesh::enforce_structure(f);
    return f;
}

SolveReport minimize_quotient(const QuotientProblem& prob,
                              const mesh::Field& init, const SolverConfig& cfg) {
    if (init.grid.get() != prob.grid.get())
        throw Error(ErrorKind::GridMismatch, "init field built on another grid");
    Work w(prob);
    const mesh::MeridianGrid& g = w.g;
    const double p = w.p;

    std::vector<double> x;
    mesh::gather(g, init.values, x);
    w.project(x);
    double mass = w.pow_mass(x);
    if (!(mass > 0.0))
        throw Error(ErrorKind::DegenerateInit,
                    "projected initial guess carries no weighted mass");
    kernels::scale(std::pow(mass, -1.0 / p), x);

    std::vector<double> ax, np, grad, dir, xc, axc;
    kernels::csr_matvec(g.stiffness, x, ax);
    double energy = kernels::dot(x, ax);
    double rvalue = energy; // P = 1

    SolveReport rep;
    rep.quotient_trace.push_back(rvalue);
    bool converged = false;
    int it = 0;
    for (it = 0; it < cfg.max_iter; ++it) {
        w.nonlinear_term(x, np);
        grad.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k)
            grad[k] = ax[k] - energy * np[k];
        const double res = w.residual_from_gradient(grad, np, energy);
        if (res < cfg.tol) {
            converged = true;
            break;
        }

        // one inexact Poisson solve per step
        std::vector<double> rhs(grad.size());
        for (std::size_t k = 0; k < grad.size(); ++k) rhs[k] = -grad[k];
        pcg(g.stiffness, w.precond, rhs, dir, cfg.cg_tol, cfg.cg_max_iter);

        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-14) {
            xc = x;
            kernels::axpy(t, dir, xc);
            w.project(xc);
            const double mc = w.pow_mass(xc);
            if (mc > 0.0) {
                kernels::csr_matvec(g.stiffness, xc, axc);
                const double ec = kernels::dot(xc, axc);
                const double rc = ec * std::pow(mc, -2.0 / p);
                double pred = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k)
                    pred += grad[k] * (xc[k] - x[k]);
                const bool ok = pred <= 0.0
                                    ? rc <= rvalue + cfg.armijo_c * 2.0 * pred
                                    : rc <= rvalue;
                if (ok) {
                    const double s = std::pow(mc, -1.0 / p);
                    x.swap(xc);
                    kernels::scale(s, x);
                    ax.swap(axc);
                    kernels::scale(s, ax);
                    energy = ec * s * s;
                    rvalue = rc;
                    accepted = true;
                    break;
                }
            }
            t *= cfg.backtrack;
        }
        if (!accepted) break; // stalled; final residual decides `converged`
        rep.quotient_trace.push_back(rvalue);
    }

    // Nehari scaling: with P(x) = 1, lambda = E and u = lambda^{1/(p-2)} x
    w.nonlinear_term(x, np);
    grad.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) grad[k] = ax[k] - energy * np[k];
    rep.residual = w.residual_from_gradient(grad, np, energy);
    if (!converged && rep.residual < cfg.tol) converged = true;

    std::vector<double> u = x;
    kernels::scale(std::pow(energy, 1.0 / (p - 2.0)), u);
    rep.solution = mesh::make_field(prob.grid);
    mesh::scatter(g, u, rep.solution.values);
    mesh::enforce_structure(rep.solution);

    rep.quotient = rvalue;
    rep.energy = mesh::dirichlet_energy(rep.solution);
    rep.max_info = mesh::field_max(rep.solution);
    rep.max_value = rep.max_info.value;
    rep.iterations = it;
    rep.converged = converged;
    return rep;
}

SolveReport solve_ground_state(const QuotientProblem& prob,
                               const SolverConfig& cfg) {
    SolveReport best;
    bool have = false;
    for (SeedKind kind : cfg.seeds) {
        SolveReport r =
            minimize_quotient(prob, make_seed(prob, kind, cfg.rng_seed), cfg);
        const bool better =
            !have || (r.converged && !best.converged) ||
            (r.converged == best.converged && r.quotient < best.quotient);
        if (better) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

QuotientProblem restricted_problem(const model::ProblemSpec& spec,
                                   const mesh::GridPtr& grid) {
    if (grid->kind != mesh::DomainKind::BallPolar || grid->n != spec.reduced_dim())
        throw Error(ErrorKind::GridMismatch,
                    "need a ball grid in the case's reduced dimension");
    QuotientProblem q;
    q.grid = grid;
    q.p = spec.p;
    switch (spec.kind) {
        case model::ProblemCase::FullHenon:
            q.weight = {reduction::WeightKind::FullHenonReduced, spec.alpha, 0.0};
            q.symmetry = SymmetryClass::AxiSym;
            break;
        case model::ProblemCase::PartialHenon:
            q.weight = {reduction::WeightKind::PartialReduced, spec.alpha, 0.0};
            q.symmetry = SymmetryClass::AxiSym;
            break;
        case model::ProblemCase::Hyperplane:
            q.weight = {reduction::WeightKind::HyperplaneAxis, spec.alpha, 0.0};
            q.symmetry = SymmetryClass::AxiSymEven;
            break;
    }
    return q;
}

QuotientProblem unrestricted_problem(const model::ProblemSpec& spec,
                                     const mesh::GridPtr& grid) {
    QuotientProblem q = restricted_problem(spec, grid);
    q.symmetry = SymmetryClass::AxiSym;
    q.weight.kind = spec.kind == model::ProblemCase::Hyperplane
                        ? reduction::WeightKind::RadialPow
                        : reduction::WeightKind::FullHenonReduced;
    return q;
}

mesh::Field nehari_rescale(const QuotientProblem& prob, const mesh::Field& f) {
    const double e = mesh::dirichlet_energy(f);
    const double mass = mesh::weighted_lp_pow(f, prob.weight, prob.p);
    if (!(mass > 0.0))
        throw Error(ErrorKind::DegenerateInit, "cannot rescale a massless field");
    mesh::Field out = f;
    const double lam = std::pow(e / mass, 1.0 / (prob.p - 2.0));
    kernels::scale(lam, out.values);
    return out;
}

double pde_residual(const QuotientProblem& prob, const mesh::Field& f) {
    const mesh::MeridianGrid& g = *f.grid;
    const mesh::Field lap = mesh::apply_laplacian(f);
    const auto wt = mesh::weight_table(g, prob.weight);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            if (g.is_dirichlet_node(i, j)) continue;
            const int k = g.idx(i, j);
            const double rhs =
                wt[k] * kernels::pow_abs(f.values[k], prob.p - 1.0);
            num = std::max(num, std::fabs(lap.values[k] + rhs));
            den = std::max(den, rhs);
        }
    return den > 0.0 ? num / den : 0.0;
}

mesh::Field rescale_to_half_unit_ball(const mesh::Field& w, double p) {
    const mesh::MeridianGrid& g = *w.grid;
    if (g.kind != mesh::DomainKind::BallPolar || g.radius != 1.0)
        throw Error(ErrorKind::GridMismatch, "expected a unit-ball field");
    mesh::GridPtr half =
        mesh::build_ball_grid(g.n, g.n1, g.n2, g.grading, g.pole_grading, 0.5);
    mesh::Field v = mesh::make_field(half);
    v.values = w.values;
    kernels::scale(reduction::unit_to_half_factor(p), v.values);
    mesh::enforce_structure(v);
    return v;
}

double limit_gamma_scaling(int n, double p, double gamma) {
    return std::pow(gamma, 2.0 - n + 2.0 * n / p);
}

LimitConstant solve_limit_constant(int n, double p, double gamma,
                                   const LimitBox& box, const SolverConfig& cfg) {
    LimitConstant lc;
    lc.gamma = gamma;
    lc.p = p;
    lc.n = n;

    auto run = [&](double smax, double tmax, int ns, int nt) {
        QuotientProblem q;
        q.grid = mesh::build_halfspace_grid(n, ns, nt, smax, tmax);
        q.weight = {reduction::WeightKind::Exponential, 0.0, gamma};
        q.p = p;
        q.symmetry = SymmetryClass::AxiSym;
        return solve_ground_state(q, cfg);
    };

    lc.report = run(box.s_max, box.t_max, box.n_s, box.n_t);
    lc.value = lc.report.quotient;
    SolveReport doubled = run(2.0 * box.s_max, 2.0 * box.t_max,
                              2 * (box.n_s - 1) + 1, 2 * (box.n_t - 1) + 1);
    lc.value_doubled = doubled.quotient;
    lc.truncation_rel_change =
        std::fabs(lc.value_doubled - lc.value) / std::fabs(lc.value);
    return lc;
}

double monotone_s_violation(const mesh::Field& f) {
    const mesh::MeridianGrid& g = *f.grid;
    if (g.kind != mesh::DomainKind::HalfSpaceBox)
        throw Error(ErrorKind::GridMismatch, "s-monotonicity is a box check");
    const double mx = mesh::field_max(f).value;
    if (!(mx > 0.0)) return 0.0;
    double worst = 0.0;
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i + 1 < g.n1; ++i)
            worst = std::max(worst, f.at(i + 1, j) - f.at(i, j));
    return worst / mx;
}

double monotone_polar_violation(const mesh::Field& f, double pole_sigma,
                                bool even_class) {
    const mesh::MeridianGrid& g = *f.grid;
    if (g.kind != mesh::DomainKind::BallPolar)
        throw Error(ErrorKind::GridMismatch, "polar monotonicity is a ball check");
    const double mx = mesh::field_max(f).value;
    if (!(mx > 0.0)) return 0.0;
    double worst = 0.0;
    for (int i = 1; i < g.n1; ++i)
        for (int j = 0; j + 1 < g.n2; ++j) {
            const double towards_pi = f.at(i, j + 1) - f.at(i, j);
            bool expect_increasing_j;
            if (even_class) {
                // decreasing away from each pole on its own half
                expect_increasing_j = 0.5 * (g.c2[j] + g.c2[j + 1]) > 0.5 * kPi;
            } else {
                expect_increasing_j = pole_sigma > 0.5 * kPi;
            }
            const double v = expect_increasing_j ? -towards_pi : towards_pi;
            worst = std::max(worst, v);
        }
    return worst / mx;
}

double evenness_violation(const mesh::Field& f) {
    const mesh::MeridianGrid& g = *f.grid;
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            worst = std::max(
                worst, std::fabs(f.at(i, j) - f.at(i, g.n2 - 1 - j)));
    return worst;
}

} // namespace henonlab::solver
