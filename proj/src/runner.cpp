#include "henonlab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "henonlab/asymptotics.hpp"
#include "henonlab/config.hpp"
#include "henonlab/errors.hpp"
#include "henonlab/io.hpp"
#include "henonlab/mesh.hpp"
#include "henonlab/model.hpp"
#include "henonlab/reduction.hpp"
#include "henonlab/solver.hpp"

namespace henonlab::runner {

namespace {

constexpr double kPi = 3.14159265358979323846;

namespace fs = std::filesystem;

struct Prepared {
    config::RunConfig rc;
    std::string out;
    std::string provenance;
};

Prepared prepare(const CliOptions& opts) {
    if (opts.config_path.empty())
        throw Error(ErrorKind::ConfigError, "no config file given (--config)");
    Prepared p;
    p.rc = config::load_config(opts.config_path);
    if (opts.has_seed) p.rc.solver.rng_seed = opts.seed;
    p.out = opts.out_dir.empty() ? p.rc.output_dir : opts.out_dir;
#ifdef _OPENMP
    if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif
    std::error_code ec;
    fs::create_directories(p.out, ec);
    if (ec)
        throw Error(ErrorKind::IoError,
                    "cannot create output directory '" + p.out + "': " + ec.message());
    p.provenance = io::provenance_line(p.rc.config_hash, p.rc.solver.rng_seed);
    return p;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

/// Errors stop the run; warnings go to stderr and the run continues.
void validate_or_throw(const model::ProblemSpec& spec) {
    const auto v = model::validate(spec);
    for (const auto& w : v.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!v.ok()) throw Error(ErrorKind::ConfigError, v.errors[0].message);
}

double concentration_pole(model::ProblemCase kind) {
    return kind == model::ProblemCase::PartialHenon ? kPi : 0.0;
}

int partial_exit(const CliOptions& opts, const char* what) {
    std::fprintf(stderr, "%s%s\n", what,
                 opts.allow_partial ? " (--allow-partial: exiting 0)" : "");
    return opts.allow_partial ? kExitOk : kExitNumerical;
}

int solve_impl(const CliOptions& opts) {
    Prepared p = prepare(opts);
    const auto& spec = p.rc.spec;
    validate_or_throw(spec);

    auto grid = mesh::build_ball_grid(spec.reduced_dim(), p.rc.grid.n_rho,
                                      p.rc.grid.n_sigma, p.rc.grid.grading,
                                      p.rc.grid.pole_grading);
    const auto prob = solver::restricted_problem(spec, grid);
    const auto rep = solver::solve_ground_state(prob, p.rc.solver);

    const bool even = spec.kind == model::ProblemCase::Hyperplane;
    const double mono = solver::monotone_polar_violation(
        rep.solution, concentration_pole(spec.kind), even);
    const double evenv = even ? solver::evenness_violation(rep.solution) : 0.0;
    const double r_alpha =
        asymptotics::original_radius_of_max(spec.kind, rep.max_info.c1);

    io::CsvWriter w(join(p.out, "solve_report.csv"), p.provenance,
                    {"case", "m", "N", "p", "alpha", "quotient", "energy",
                     "residual", "max_value", "max_rho", "max_sigma", "r_alpha",
                     "max_value_original", "iterations", "converged",
                     "monotone_violation", "even_violation"});
    w.cell(model::case_name(spec.kind));
    w.cell(spec.m);
    w.cell(spec.N);
    w.cell(spec.p);
    w.cell(spec.alpha);
    w.cell(rep.quotient);
    w.cell(rep.energy);
    w.cell(rep.residual);
    w.cell(rep.max_value);
    w.cell(rep.max_info.c1);
    w.cell(rep.max_info.c2);
    w.cell(r_alpha);
    w.cell(asymptotics::original_max_value(spec.kind, rep.max_value, spec.p));
    w.cell(rep.iterations);
    w.cell(rep.converged ? 1 : 0);
    w.cell(mono);
    w.cell(evenv);
    w.endrow();
    w.close();

    io::write_field_csv(join(p.out, "solution.csv"), p.provenance, rep.solution);

    if (!rep.converged) return partial_exit(opts, "solver did not converge");
    return kExitOk;
}

int sweep_impl(const CliOptions& opts) {
    Prepared p = prepare(opts);
    validate_or_throw(p.rc.spec);
    if (p.rc.alphas.empty())
        throw Error(ErrorKind::ConfigError, "sweep needs a non-empty 'alphas' list");

    const auto sweep =
        asymptotics::run_sweep(p.rc.spec, p.rc.alphas, p.rc.grid, p.rc.solver);
    io::write_sweep_csv(join(p.out, "sweep.csv"), p.provenance, sweep.records);

    std::vector<double> la, lm, ga, gv, na, nq;
    for (const auto& r : sweep.records) {
        if (!r.converged) continue;
        la.push_back(std::log(r.alpha));
        lm.push_back(std::log(r.max_value));
        ga.push_back(r.alpha);
        gv.push_back(r.alpha_gap);
        na.push_back(r.alpha);
        nq.push_back(r.quotient / std::pow(r.alpha, sweep.exps.quotient_beta));
    }
    io::write_xy_dat(join(p.out, "blowup.dat"), p.provenance, la, lm);
    io::write_xy_dat(join(p.out, "gap.dat"), p.provenance, ga, gv);
    io::write_xy_dat(join(p.out, "normalized_quotient.dat"), p.provenance, na, nq);

    bool all_converged = true;
    for (const auto& r : sweep.records) all_converged &= r.converged;

    try {
        const auto fits = asymptotics::fit_sweep(sweep);
        io::write_fits_csv(join(p.out, "fits.csv"), p.provenance, fits);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        std::fprintf(stderr, "rate fits skipped: %s\n", e.what());
        return partial_exit(opts, "too few converged points for rate fits");
    }

    if (!all_converged)
        return partial_exit(opts, "some sweep entries did not converge");
    return kExitOk;
}

int limit_impl(const CliOptions& opts) {
    Prepared p = prepare(opts);
    const int n = p.rc.limit_n;
    const double pp = p.rc.spec.p;
    if (!(pp > 2.0) || !(pp < model::critical_exponent(n)))
        throw Error(ErrorKind::ConfigError,
                    "p must lie in (2, " +
                        io::format_double(model::critical_exponent(n)) +
                        ") for limit dimension n=" + std::to_string(n));

    const auto lc = solver::solve_limit_constant(n, pp, p.rc.limit_gamma,
                                                 p.rc.box, p.rc.solver);

    io::CsvWriter w(join(p.out, "limit.csv"), p.provenance,
                    {"gamma", "p", "n", "value", "value_doubled",
                     "truncation_rel_change", "energy", "residual", "max_value",
                     "max_s", "max_t", "iterations", "converged"});
    w.cell(lc.gamma);
    w.cell(lc.p);
    w.cell(lc.n);
    w.cell(lc.value);
    w.cell(lc.value_doubled);
    w.cell(lc.truncation_rel_change);
    w.cell(lc.report.energy);
    w.cell(lc.report.residual);
    w.cell(lc.report.max_value);
    w.cell(lc.report.max_info.c1);
    w.cell(lc.report.max_info.c2);
    w.cell(lc.report.iterations);
    w.cell(lc.report.converged ? 1 : 0);
    w.endrow();
    w.close();

    io::write_field_csv(join(p.out, "limit_solution.csv"), p.provenance,
                        lc.report.solution);

    if (!lc.report.converged)
        return partial_exit(opts, "limit minimizer did not converge");
    if (lc.truncation_rel_change > p.rc.truncation_threshold) {
        std::fprintf(stderr,
                     "box doubling moved the constant by %.3g (threshold %.3g)\n",
                     lc.truncation_rel_change, p.rc.truncation_threshold);
        return partial_exit(opts, "truncated box too small");
    }
    return kExitOk;
}

int reduce_check_impl(const CliOptions& opts) {
    Prepared p = prepare(opts);
    const int m = p.rc.reduce_m;
    const auto suite = reduction::analytic_suite();
    const auto samples = reduction::default_samples();

    io::CsvWriter w(join(p.out, "reduce_check.csv"), p.provenance,
                    {"function", "check", "h", "residual"});
    io::CsvWriter ws(join(p.out, "reduce_slopes.csv"), p.provenance,
                     {"function", "slope"});

    bool ok = true;
    for (const auto& f : suite) {
        const double sym = reduction::correspondence_residual_symbolic(f, m, samples);
        w.cell(f.name);
        w.cell(std::string("symbolic"));
        w.cell(0.0);
        w.cell(sym);
        w.endrow();
        if (sym > 1e-10) ok = false;

        for (double h : p.rc.reduce_h) {
            w.cell(f.name);
            w.cell(std::string("fd"));
            w.cell(h);
            w.cell(reduction::correspondence_residual_fd(f, m, h, samples));
            w.endrow();
        }
        try {
            const double slope =
                reduction::correspondence_fd_slope(f, m, p.rc.reduce_h, samples);
            ws.cell(f.name);
            ws.cell(slope);
            ws.endrow();
            if (slope < 1.5 || slope > 2.5) ok = false;
        } catch (const Error& e) {
            // identically zero residual (exact cancellation): nothing to fit
            if (e.kind() != ErrorKind::InsufficientData) throw;
        }
    }
    w.close();
    ws.close();

    if (!ok) {
        std::fprintf(stderr, "correspondence check failed (see reduce_check.csv)\n");
        return kExitNumerical;
    }
    return kExitOk;
}

int fit_impl(const CliOptions& opts) {
    Prepared p = prepare(opts);
    validate_or_throw(p.rc.spec);
    if (p.rc.sweep_csv.empty())
        throw Error(ErrorKind::ConfigError, "fit needs 'sweep_csv' in the config");

    asymptotics::SweepResult sweep;
    sweep.base = p.rc.spec;
    sweep.exps = model::exponents(p.rc.spec.reduced_dim(), p.rc.spec.p);
    sweep.records = io::read_sweep_csv(p.rc.sweep_csv);

    const auto fits = asymptotics::fit_sweep(sweep);
    io::write_fits_csv(join(p.out, "fits.csv"), p.provenance, fits);
    return kExitOk;
}

} // namespace

int cmd_solve(const CliOptions& opts) { return run_command("solve", opts); }
int cmd_sweep(const CliOptions& opts) { return run_command("sweep", opts); }
int cmd_limit(const CliOptions& opts) { return run_command("limit", opts); }
int cmd_reduce_check(const CliOptions& opts) {
    return run_command("reduce-check", opts);
}
int cmd_fit(const CliOptions& opts) { return run_command("fit", opts); }

int run_command(const std::string& name, const CliOptions& opts) {
    try {
        if (name == "solve") return solve_impl(opts);
        if (name == "sweep") return sweep_impl(opts);
        if (name == "limit") return limit_impl(opts);
        if (name == "reduce-check") return reduce_check_impl(opts);
        if (name == "fit") return fit_impl(opts);
        std::fprintf(stderr, "unknown command '%s'\n", name.c_str());
        return kExitConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.kind()) {
            case ErrorKind::ConfigError:
            case ErrorKind::BadDimension:
            case ErrorKind::ExponentOutOfRange:
            case ErrorKind::BadAlpha:
            case ErrorKind::GridMismatch:
                return kExitConfig;
            case ErrorKind::IoError:
                return kExitIo;
            default:
                return kExitNumerical;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}

} // namespace henonlab::runner
