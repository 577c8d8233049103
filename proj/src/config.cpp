#include "henonlab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "henonlab/errors.hpp"
#include "henonlab/io.hpp"

namespace henonlab::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw Error(ErrorKind::ConfigError, origin + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& origin, const std::string& where) {
    for (const auto& item : obj.items())
        if (!known.count(item.key()))
            fail(origin, "unknown key '" + item.key() + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& origin) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(origin, std::string("key '") + key + "': " + e.what());
    }
}

model::ProblemCase parse_case(const std::string& s, const std::string& origin) {
    if (s == "full_henon") return model::ProblemCase::FullHenon;
    if (s == "partial_henon") return model::ProblemCase::PartialHenon;
    if (s == "hyperplane") return model::ProblemCase::Hyperplane;
    fail(origin, "unknown case '" + s +
                     "' (expected full_henon, partial_henon or hyperplane)");
}

solver::SeedKind parse_seed(const std::string& s, const std::string& origin) {
    if (s == "axis_bump") return solver::SeedKind::AxisBump;
    if (s == "uniform_cap") return solver::SeedKind::UniformCap;
    if (s == "random_nonneg") return solver::SeedKind::RandomNonneg;
    fail(origin, "unknown seed kind '" + s +
                     "' (expected axis_bump, uniform_cap or random_nonneg)");
}

void parse_grid(const json& obj, asymptotics::GridParams& gp,
                const std::string& origin) {
    reject_unknown(obj, {"n_rho", "n_sigma", "grading", "pole_grading"}, origin,
                   "grid");
    read(obj, "n_rho", gp.n_rho, origin);
    read(obj, "n_sigma", gp.n_sigma, origin);
    read(obj, "grading", gp.grading, origin);
    read(obj, "pole_grading", gp.pole_grading, origin);
    if (gp.n_rho < 8 || gp.n_sigma < 8)
        fail(origin, "grid.n_rho and grid.n_sigma must be at least 8");
    if (gp.grading < 1.0 || gp.grading > 1.2)
        fail(origin, "grid.grading must lie in [1, 1.2]");
    if (gp.pole_grading < 1.0 || gp.pole_grading > 1.2)
        fail(origin, "grid.pole_grading must lie in [1, 1.2]");
}

void parse_solver(const json& obj, solver::SolverConfig& sc,
                  const std::string& origin) {
    reject_unknown(obj,
                   {"tol", "max_iter", "armijo_c", "backtrack", "cg_tol",
                    "cg_max_iter", "seeds", "rng_seed"},
                   origin, "solver");
    read(obj, "tol", sc.tol, origin);
    read(obj, "max_iter", sc.max_iter, origin);
    read(obj, "armijo_c", sc.armijo_c, origin);
    read(obj, "backtrack", sc.backtrack, origin);
    read(obj, "cg_tol", sc.cg_tol, origin);
    read(obj, "cg_max_iter", sc.cg_max_iter, origin);
    read(obj, "rng_seed", sc.rng_seed, origin);
    if (obj.contains("seeds")) {
        std::vector<std::string> names;
        read(obj, "seeds", names, origin);
        if (names.empty()) fail(origin, "solver.seeds must not be empty");
        sc.seeds.clear();
        for (const auto& s : names) sc.seeds.push_back(parse_seed(s, origin));
    }
    if (sc.tol <= 0 || sc.max_iter <= 0 || sc.backtrack <= 0 ||
        sc.backtrack >= 1 || sc.cg_tol <= 0 || sc.cg_max_iter <= 0)
        fail(origin, "solver controls out of range");
}

void parse_limit(const json& obj, RunConfig& rc, const std::string& origin) {
    reject_unknown(obj, {"gamma", "n", "s_max", "t_max", "n_s", "n_t"}, origin,
                   "limit");
    read(obj, "gamma", rc.limit_gamma, origin);
    read(obj, "n", rc.limit_n, origin);
    read(obj, "s_max", rc.box.s_max, origin);
    read(obj, "t_max", rc.box.t_max, origin);
    read(obj, "n_s", rc.box.n_s, origin);
    read(obj, "n_t", rc.box.n_t, origin);
    if (rc.limit_gamma <= 0) fail(origin, "limit.gamma must be positive");
    if (rc.limit_n < 2) fail(origin, "limit.n must be at least 2");
    if (rc.box.s_max <= 0 || rc.box.t_max <= 0)
        fail(origin, "limit box extents must be positive");
    if (rc.box.n_s < 8 || rc.box.n_t < 8)
        fail(origin, "limit.n_s and limit.n_t must be at least 8");
}

void parse_reduce(const json& obj, RunConfig& rc, const std::string& origin) {
    reject_unknown(obj, {"m", "h_values"}, origin, "reduce_check");
    read(obj, "m", rc.reduce_m, origin);
    read(obj, "h_values", rc.reduce_h, origin);
    if (rc.reduce_m < 2) fail(origin, "reduce_check.m must be at least 2");
    if (rc.reduce_h.empty()) fail(origin, "reduce_check.h_values must not be empty");
    for (double h : rc.reduce_h)
        if (!(h > 0) || h > 0.05)
            fail(origin, "reduce_check.h_values must lie in (0, 0.05]");
}

} // namespace

RunConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(origin, e.what());
    }
    if (!root.is_object()) fail(origin, "top-level JSON value must be an object");

    reject_unknown(root,
                   {"case", "m", "N", "p", "alpha", "alphas", "grid", "solver",
                    "limit", "truncation_threshold", "output_dir", "sweep_csv",
                    "reduce_check", "seed"},
                   origin, "config");

    RunConfig rc;
    if (root.contains("case")) {
        std::string name;
        read(root, "case", name, origin);
        rc.spec.kind = parse_case(name, origin);
    }
    read(root, "m", rc.spec.m, origin);
    read(root, "N", rc.spec.N, origin);
    read(root, "p", rc.spec.p, origin);
    read(root, "alpha", rc.spec.alpha, origin);
    read(root, "alphas", rc.alphas, origin);
    if (root.contains("grid")) parse_grid(root.at("grid"), rc.grid, origin);
    if (root.contains("solver")) parse_solver(root.at("solver"), rc.solver, origin);
    if (root.contains("limit")) parse_limit(root.at("limit"), rc, origin);
    read(root, "truncation_threshold", rc.truncation_threshold, origin);
    read(root, "output_dir", rc.output_dir, origin);
    read(root, "sweep_csv", rc.sweep_csv, origin);
    if (root.contains("reduce_check"))
        parse_reduce(root.at("reduce_check"), rc, origin);
    read(root, "seed", rc.solver.rng_seed, origin);

    if (rc.truncation_threshold <= 0)
        fail(origin, "truncation_threshold must be positive");
    for (std::size_t i = 0; i + 1 < rc.alphas.size(); ++i)
        if (!(rc.alphas[i] < rc.alphas[i + 1]))
            fail(origin, "alphas must be strictly increasing");

    rc.config_hash = io::fnv1a64(json_text);
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace henonlab::config
