#include "henonlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "henonlab/errors.hpp"
#include "henonlab/reduction.hpp"

namespace henonlab::asymptotics {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double original_radius_of_max(model::ProblemCase kind, double max_rho_unit) {
    if (kind == model::ProblemCase::Hyperplane) return max_rho_unit;
    // unit ball rho -> half ball rho/2 -> r = sqrt(2 * rho/2)
    return std::sqrt(max_rho_unit);
}

double original_max_value(model::ProblemCase kind, double max_value_unit,
                          double p) {
    if (kind == model::ProblemCase::Hyperplane) return max_value_unit;
    return reduction::unit_to_half_factor(p) * max_value_unit;
}

SweepResult run_sweep(const model::ProblemSpec& base,
                      const std::vector<double>& alphas, const GridParams& gp,
                      const solver::SolverConfig& cfg) {
    if (alphas.empty())
        throw Error(ErrorKind::InsufficientData, "empty alpha list");
    for (std::size_t k = 0; k + 1 < alphas.size(); ++k)
        if (!(alphas[k] < alphas[k + 1]))
            throw Error(ErrorKind::ConfigError,
                        "alpha values must be strictly increasing");

    SweepResult out;
    out.base = base;
    out.exps = model::exponents(base.reduced_dim(), base.p);

    mesh::GridPtr grid =
        mesh::build_ball_grid(base.reduced_dim(), gp.n_rho, gp.n_sigma,
                              gp.grading, gp.pole_grading, 1.0);

    for (double a : alphas) {
        model::ProblemSpec spec = base;
        spec.alpha = a;
        SweepRecord rec;
        rec.alpha = a;
        try {
            const auto v = model::validate(spec);
            if (!v.ok()) throw Error(ErrorKind::ConfigError, v.errors[0].message);
            solver::QuotientProblem prob = solver::restricted_problem(spec, grid);
            solver::SolveReport rep = solver::solve_ground_state(prob, cfg);
            rec.quotient = rep.quotient;
            rec.energy = rep.energy;
            rec.max_value = original_max_value(base.kind, rep.max_value, base.p);
            rec.max_rho = rep.max_info.c1;
            rec.r_alpha = original_radius_of_max(base.kind, rec.max_rho);
            rec.alpha_gap = a * (1.0 - rec.r_alpha);
            rec.iterations = rep.iterations;
            rec.residual = rep.residual;
            rec.converged = rep.converged;
            out.solutions.push_back(std::move(rep.solution));
        } catch (const Error&) {
            rec.converged = false; // entry isolated; row still reported
            out.solutions.push_back(mesh::make_field(grid));
        }
        out.records.push_back(rec);
    }
    return out;
}

FitResult fit_power_law(const std::string& quantity,
                        const std::vector<double>& alphas,
                        const std::vector<double>& values, double target) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < alphas.size() && k < values.size(); ++k)
        if (std::isfinite(values[k]) && values[k] > 0.0 && alphas[k] > 0.0) {
            xs.push_back(std::log(alphas[k]));
            ys.push_back(std::log(values[k]));
        }
    const std::size_t n = xs.size();
    if (n < 2)
        throw Error(ErrorKind::InsufficientData,
                    "power-law fit needs at least two positive samples");

    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < n; ++k) { sx += xs[k]; sy += ys[k]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    FitResult f;
    f.quantity = quantity;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = ys[k] - (f.intercept + f.slope * xs[k]);
        ss_res += e * e;
    }
    f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    f.target = target;
    f.rel_dev = target != 0.0 ? std::fabs(f.slope - target) / std::fabs(target)
                              : std::fabs(f.slope);
    return f;
}

std::vector<FitResult> fit_sweep(const SweepResult& sweep) {
    std::vector<double> a, mx, q, en;
    for (const auto& r : sweep.records) {
        if (!r.converged) continue;
        a.push_back(r.alpha);
        mx.push_back(r.max_value);
        q.push_back(r.quotient);
        en.push_back(r.energy);
    }
    const double p = sweep.base.p;
    std::vector<FitResult> fits;
    fits.push_back(fit_power_law("max_value", a, mx, 2.0 / (p - 2.0)));
    fits.push_back(fit_power_law("quotient", a, q, sweep.exps.quotient_beta));
    fits.push_back(fit_power_law("energy", a, en, sweep.exps.energy_gamma));
    return fits;
}

GapLaw gap_law(const SweepResult& sweep) {
    GapLaw g;
    for (const auto& r : sweep.records)
        if (r.converged) g.alpha_gap.push_back(r.alpha_gap);
    const std::size_t n = g.alpha_gap.size();
    if (n < 2)
        throw Error(ErrorKind::InsufficientData,
                    "gap law needs at least two converged records");

    const std::size_t lo = n / 2; // top half of the alpha range
    double mn = g.alpha_gap[lo], mx = g.alpha_gap[lo], mean = 0.0;
    for (std::size_t k = lo; k < n; ++k) {
        mn = std::min(mn, g.alpha_gap[k]);
        mx = std::max(mx, g.alpha_gap[k]);
        mean += g.alpha_gap[k];
    }
    mean /= static_cast<double>(n - lo);
    g.spread_top_half = mean != 0.0 ? (mx - mn) / mean : 0.0;
    const double a1 = g.alpha_gap[n - 2], a2 = g.alpha_gap[n - 1];
    g.spread_last_pair = std::fabs(a2 - a1) / (0.5 * (a1 + a2));
    g.ell_estimate = a2;
    return g;
}

double limit_gamma_for_case(model::ProblemCase kind) {
    return kind == model::ProblemCase::Hyperplane ? 1.0 : 0.5;
}

LimitComparison compare_limit(const SweepResult& sweep,
                              const solver::LimitConstant& lc) {
    const model::ProblemCase kind = sweep.base.kind;
    const double want_gamma = limit_gamma_for_case(kind);
    if (std::fabs(lc.gamma - want_gamma) > 1e-12 || lc.n != sweep.base.reduced_dim())
        throw Error(ErrorKind::ConfigError,
                    "limit constant solved for a different (gamma, n)");

    LimitComparison c;
    const double p = sweep.base.p;
    c.factor = kind == model::ProblemCase::Hyperplane
                   ? std::pow(2.0, 1.0 - 2.0 / p)
                   : 1.0;
    c.target = c.factor * lc.value;
    for (const auto& r : sweep.records) {
        const double norm =
            r.quotient / std::pow(r.alpha, sweep.exps.quotient_beta);
        c.normalized.push_back(norm);
        c.rel_dev.push_back(std::fabs(norm - c.target) / c.target);
    }
    return c;
}

double profile_comparison(const mesh::Field& ball_solution, double alpha,
                          double p, double pole_sigma,
                          const solver::LimitConstant& lc) {
    const mesh::Field& lim = lc.report.solution;
    const mesh::MeridianGrid& hg = *lim.grid;
    const mesh::MeridianGrid& bg = *ball_solution.grid;
    if (bg.kind != mesh::DomainKind::BallPolar || bg.radius != 1.0)
        throw Error(ErrorKind::GridMismatch, "expected a unit-ball solution");

    const double axis_sign = pole_sigma > 0.5 * kPi ? -1.0 : 1.0;
    const double amp = std::pow(alpha, -2.0 / (p - 2.0));

    mesh::Field hat = mesh::make_field(lim.grid, mesh::FieldTag::Free);
    for (int i = 0; i < hg.n1; ++i)
        for (int j = 0; j < hg.n2; ++j) {
            const double s = hg.c1[i], t = hg.c2[j];
            const double x_axis = axis_sign * (1.0 - t / alpha);
            const double x_perp = s / alpha;
            const double rho = std::hypot(x_perp, x_axis);
            if (rho >= 1.0) continue; // outside the blown-up ball: extend by 0
            const double sig = std::atan2(x_perp, x_axis);
            hat.at(i, j) = amp * mesh::sample_bilinear(ball_solution, rho, sig);
        }

    mesh::Field diff = mesh::make_field(lim.grid, mesh::FieldTag::Free);
    for (std::size_t k = 0; k < diff.values.size(); ++k)
        diff.values[k] = hat.values[k] - lim.values[k];
    const double base = mesh::dirichlet_energy(lim);
    return mesh::dirichlet_energy(diff) / base;
}

} // namespace henonlab::asymptotics
