#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "henonlab/config.hpp"
#include "henonlab/errors.hpp"
#include "henonlab/io.hpp"
#include "henonlab/runner.hpp"

using namespace henonlab;
namespace fs = std::filesystem;

namespace {

const char* kRoot = "cli_test_tmp";

std::string prep_dir(const std::string& name) {
    const fs::path dir = fs::path(kRoot) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string join2(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

runner::CliOptions opts_for(const std::string& config_path,
                            const std::string& out_dir = "") {
    runner::CliOptions o;
    o.config_path = config_path;
    o.out_dir = out_dir;
    return o;
}

} // namespace

TEST_CASE("a minimal config parses with defaults") {
    const std::string text = R"({"case": "hyperplane"})";
    const config::RunConfig rc = config::parse_config(text, "mem");
    CHECK(rc.spec.kind == model::ProblemCase::Hyperplane);
    CHECK(rc.spec.m == 2);
    CHECK(rc.spec.N == 3);
    CHECK(rc.spec.p == 3.0);
    CHECK(rc.spec.alpha == 40.0);
    CHECK(rc.alphas.empty());
    CHECK(rc.grid.n_rho == 128);
    CHECK(rc.grid.n_sigma == 64);
    CHECK(rc.grid.grading == doctest::Approx(1.03));
    CHECK(rc.solver.tol == 1e-6);
    CHECK(rc.solver.seeds.size() == 3);
    CHECK(rc.box.s_max == 12.0);
    CHECK(rc.box.t_max == 24.0);
    CHECK(rc.box.n_s == 96);
    CHECK(rc.box.n_t == 192);
    CHECK(rc.limit_gamma == 0.5);
    CHECK(rc.limit_n == 3);
    CHECK(rc.truncation_threshold == 0.01);
    CHECK(rc.output_dir == "out");
    CHECK(rc.sweep_csv.empty());
    CHECK(rc.reduce_m == 2);
    CHECK(rc.reduce_h == std::vector<double>{0.02, 0.01, 0.005, 0.0025});
    CHECK(rc.config_hash == io::fnv1a64(text));
    CHECK(rc.config_hash != 0);
}

TEST_CASE("a full config overrides every control") {
    const std::string text = R"({
        "case": "full_henon",
        "m": 3,
        "N": 5,
        "p": 2.5,
        "alpha": 60,
        "alphas": [20, 40, 80],
        "grid": {"n_rho": 64, "n_sigma": 32, "grading": 1.05,
                 "pole_grading": 1.08},
        "solver": {"tol": 1e-8, "max_iter": 100, "armijo_c": 1e-3,
                   "backtrack": 0.25, "cg_tol": 0.05, "cg_max_iter": 50,
                   "seeds": ["uniform_cap"], "rng_seed": 7},
        "limit": {"gamma": 1.0, "n": 4, "s_max": 8, "t_max": 16,
                  "n_s": 32, "n_t": 64},
        "truncation_threshold": 0.02,
        "output_dir": "results",
        "sweep_csv": "prev/sweep.csv",
        "reduce_check": {"m": 4, "h_values": [0.01, 0.005]},
        "seed": 99
    })";
    const config::RunConfig rc = config::parse_config(text, "mem");
    CHECK(rc.spec.kind == model::ProblemCase::FullHenon);
    CHECK(rc.spec.m == 3);
    CHECK(rc.spec.N == 5);
    CHECK(rc.spec.p == 2.5);
    CHECK(rc.spec.alpha == 60.0);
    CHECK(rc.alphas == std::vector<double>{20.0, 40.0, 80.0});
    CHECK(rc.grid.n_rho == 64);
    CHECK(rc.grid.n_sigma == 32);
    CHECK(rc.grid.grading == 1.05);
    CHECK(rc.grid.pole_grading == 1.08);
    CHECK(rc.solver.tol == 1e-8);
    CHECK(rc.solver.max_iter == 100);
    CHECK(rc.solver.armijo_c == 1e-3);
    CHECK(rc.solver.backtrack == 0.25);
    CHECK(rc.solver.cg_tol == 0.05);
    CHECK(rc.solver.cg_max_iter == 50);
    REQUIRE(rc.solver.seeds.size() == 1);
    CHECK(rc.solver.seeds[0] == solver::SeedKind::UniformCap);
    // the top-level "seed" wins over solver.rng_seed (it parses later)
    CHECK(rc.solver.rng_seed == 99);
    CHECK(rc.limit_gamma == 1.0);
    CHECK(rc.limit_n == 4);
    CHECK(rc.box.s_max == 8.0);
    CHECK(rc.box.t_max == 16.0);
    CHECK(rc.box.n_s == 32);
    CHECK(rc.box.n_t == 64);
    CHECK(rc.truncation_threshold == 0.02);
    CHECK(rc.output_dir == "results");
    CHECK(rc.sweep_csv == "prev/sweep.csv");
    CHECK(rc.reduce_m == 4);
    CHECK(rc.reduce_h == std::vector<double>{0.01, 0.005});
}

TEST_CASE("configs with typos or bad values are rejected") {
    const char* bad[] = {
        R"({"cse": "hyperplane"})",                       // typo
        R"({"grid": {"nrho": 64}})",                      // typo in a section
        R"({"case": "henon"})",                           // unknown case
        R"({"solver": {"seeds": ["bump"]}})",             // unknown seed kind
        R"({"solver": {"seeds": []}})",                   // empty seed list
        R"({"alphas": [40, 20]})",                        // not increasing
        R"({"alphas": [40, 40]})",                        // not strictly
        R"({"grid": {"n_rho": 4}})",                      // too coarse
        R"({"grid": {"grading": 1.5}})",                  // out of range
        R"({"grid": {"pole_grading": 0.8}})",             // out of range
        R"({"solver": {"backtrack": 1.5}})",              // out of range
        R"({"solver": {"tol": -1}})",                     // out of range
        R"({"limit": {"gamma": -1}})",                    // out of range
        R"({"limit": {"n_s": 4}})",                       // too coarse
        R"({"reduce_check": {"h_values": [0.1]}})",       // step too large
        R"({"reduce_check": {"m": 1}})",                  // pair count
        R"({"truncation_threshold": 0})",                 // must be positive
        R"({"p": "three"})",                              // wrong type
        R"([1, 2, 3])",                                   // not an object
        R"({"case": )",                                   // malformed JSON
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS((void)config::parse_config(text, "mem"), Error);
    }

    // messages carry the origin so CLI errors point at the file
    try {
        (void)config::parse_config(R"({"oops": 1})", "conf.json");
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigError);
        CHECK(std::string(e.what()).find("conf.json") != std::string::npos);
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }

    CHECK_THROWS_AS((void)config::load_config("no/such/file.json"), Error);
}

TEST_CASE("hashing, provenance and number formatting") {
    CHECK(io::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(io::fnv1a64("ab") != io::fnv1a64("ba"));

    CHECK(io::provenance_line(0xdeadbeefull, 42) ==
          "# henonlab 0.1.0 config=00000000deadbeef seed=42");

    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(2.0) == "2");
    CHECK(io::format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_double(-1e300) == "-1e+300");
}

TEST_CASE("csv writer enforces the declared row shape") {
    const std::string dir = prep_dir("csv");
    const std::string path = join2(dir, "table.csv");
    {
        io::CsvWriter w(path, "# prov", {"a", "b"});
        w.cell(1.5);
        w.cell(std::string("x"));
        w.endrow();
        w.cell(2);
        CHECK_THROWS_AS(w.endrow(), Error); // one cell short
    }
    const auto ls = lines_of(slurp(path));
    REQUIRE(ls.size() >= 2);
    CHECK(ls[0] == "# prov");
    CHECK(ls[1] == "a,b");
    CHECK(ls[2] == "1.5,x");
}

TEST_CASE("sweep tables roundtrip through disk") {
    const std::string dir = prep_dir("sweep_io");
    const std::string path = join2(dir, "sweep.csv");

    std::vector<asymptotics::SweepRecord> recs(2);
    recs[0].alpha = 40.0;
    recs[0].quotient = 93.7201842215;
    recs[0].energy = recs[0].quotient * recs[0].quotient * recs[0].quotient;
    recs[0].max_value = 1234.56789;
    recs[0].max_rho = 0.912345678901;
    recs[0].r_alpha = 0.955167356;
    recs[0].alpha_gap = 40.0 * (1.0 - recs[0].r_alpha);
    recs[0].iterations = 123;
    recs[0].residual = 3.2e-7;
    recs[0].converged = true;
    recs[1].alpha = 80.0;
    recs[1].converged = false;

    io::write_sweep_csv(path, "# prov", recs);
    const auto back = io::read_sweep_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].alpha == 40.0);
    CHECK(back[0].quotient == doctest::Approx(recs[0].quotient).epsilon(1e-11));
    CHECK(back[0].energy == doctest::Approx(recs[0].energy).epsilon(1e-11));
    CHECK(back[0].max_value == doctest::Approx(recs[0].max_value).epsilon(1e-11));
    CHECK(back[0].r_alpha == doctest::Approx(recs[0].r_alpha).epsilon(1e-11));
    CHECK(back[0].alpha_gap == doctest::Approx(recs[0].alpha_gap).epsilon(1e-11));
    CHECK(back[0].iterations == 123);
    CHECK(back[0].residual == doctest::Approx(3.2e-7).epsilon(1e-11));
    CHECK(back[0].converged);
    CHECK(!back[1].converged);

    CHECK_THROWS_AS((void)io::read_sweep_csv(join2(dir, "missing.csv")), Error);

    const std::string bad_header = join2(dir, "bad_header.csv");
    write_text(bad_header, "# prov\nalpha,quotient\n1,2\n");
    CHECK_THROWS_AS((void)io::read_sweep_csv(bad_header), Error);

    const std::string bad_token = join2(dir, "bad_token.csv");
    write_text(bad_token,
               "alpha,quotient,energy,max_value,max_rho,r_alpha,alpha_gap,"
               "iterations,residual,converged\n1,2,3,x,5,6,7,8,9,1\n");
    try {
        (void)io::read_sweep_csv(bad_token);
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    const std::string short_row = join2(dir, "short_row.csv");
    write_text(short_row,
               "alpha,quotient,energy,max_value,max_rho,r_alpha,alpha_gap,"
               "iterations,residual,converged\n1,2,3\n");
    CHECK_THROWS_AS((void)io::read_sweep_csv(short_row), Error);
}

TEST_CASE("exit codes map error classes") {
    const std::string dir = prep_dir("codes");

    CHECK(runner::run_command("solve", opts_for("")) == runner::kExitConfig);
    CHECK(runner::run_command("solve", opts_for("no/such.json")) ==
          runner::kExitConfig);
    CHECK(runner::run_command("rotate", opts_for("no/such.json")) ==
          runner::kExitConfig);

    // fit without a table, then with a missing table: config vs io error
    const std::string no_table = join2(dir, "no_table.json");
    write_text(no_table, R"({"output_dir": ")" + dir + R"("})");
    CHECK(runner::run_command("fit", opts_for(no_table)) == runner::kExitConfig);

    const std::string gone_table = join2(dir, "gone_table.json");
    write_text(gone_table, R"({"output_dir": ")" + dir +
                               R"(", "sweep_csv": "no/such.csv"})");
    CHECK(runner::run_command("fit", opts_for(gone_table)) == runner::kExitIo);

    // inadmissible exponent for the limit dimension
    const std::string bad_p = join2(dir, "bad_p.json");
    write_text(bad_p, R"({"output_dir": ")" + dir + R"(", "p": 6.5})");
    CHECK(runner::run_command("limit", opts_for(bad_p)) == runner::kExitConfig);

    // inadmissible alpha for a reduced case
    const std::string bad_alpha = join2(dir, "bad_alpha.json");
    write_text(bad_alpha, R"({"output_dir": ")" + dir +
                              R"(", "case": "partial_henon", "alpha": 1.0})");
    CHECK(runner::run_command("solve", opts_for(bad_alpha)) ==
          runner::kExitConfig);
}

TEST_CASE("reduce-check artifacts are deterministic") {
    const std::string dir = prep_dir("reduce");
    const std::string cfg = join2(dir, "cfg.json");
    write_text(cfg, R"({"output_dir": ")" + dir +
                        R"(", "reduce_check": {"m": 2, "h_values": [0.02, 0.01, 0.005]}})");

    REQUIRE(runner::run_command("reduce-check", opts_for(cfg)) == runner::kExitOk);
    const std::string table = slurp(join2(dir, "reduce_check.csv"));
    const std::string slopes = slurp(join2(dir, "reduce_slopes.csv"));
    CHECK(first_line(table).rfind("# henonlab 0.1.0 config=", 0) == 0);
    CHECK(lines_of(table)[1] == "function,check,h,residual");
    CHECK(lines_of(slopes)[1] == "function,slope");

    // reruns are byte-identical (no timestamps, fixed formatting)
    REQUIRE(runner::run_command("reduce-check", opts_for(cfg)) == runner::kExitOk);
    CHECK(slurp(join2(dir, "reduce_check.csv")) == table);
    CHECK(slurp(join2(dir, "reduce_slopes.csv")) == slopes);

    // a seed override lands in the provenance line
    runner::CliOptions seeded = opts_for(cfg);
    seeded.has_seed = true;
    seeded.seed = 123;
    REQUIRE(runner::run_command("reduce-check", seeded) == runner::kExitOk);
    const std::string reseeded = slurp(join2(dir, "reduce_check.csv"));
    CHECK(first_line(reseeded).find("seed=123") != std::string::npos);
    CHECK(first_line(reseeded) != first_line(table));
}

TEST_CASE("solve writes a report row and a field snapshot") {
    const std::string dir = prep_dir("solve");
    const std::string cfg = join2(dir, "cfg.json");
    write_text(cfg, R"({
        "case": "partial_henon", "alpha": 40,
        "grid": {"n_rho": 24, "n_sigma": 16, "grading": 1.0},
        "output_dir": "ignored_by_override"
    })");

    REQUIRE(runner::run_command("solve", opts_for(cfg, dir)) == runner::kExitOk);
    CHECK(!fs::exists("ignored_by_override"));

    const auto report = lines_of(slurp(join2(dir, "solve_report.csv")));
    REQUIRE(report.size() == 3);
    const auto header = split_csv(report[1]);
    const auto row = split_csv(report[2]);
    REQUIRE(header.size() == 17);
    REQUIRE(row.size() == 17);
    CHECK(header[0] == "case");
    CHECK(row[0] == "partial_henon");
    CHECK(row[4] == "40");
    CHECK(std::stod(row[5]) > 0.0);            // quotient
    CHECK(std::stod(row[7]) < 1e-6);           // residual
    CHECK(std::stod(row[11]) > 0.5);           // r_alpha
    CHECK(std::stod(row[12]) ==
          doctest::Approx(4.0 * std::stod(row[8])).epsilon(1e-10));
    CHECK(row[14] == "1");                     // converged
    CHECK(std::stod(row[15]) < 1e-6);          // monotone violation
    CHECK(row[16] == "0");                     // even violation (not even class)

    const auto snap = lines_of(slurp(join2(dir, "solution.csv")));
    CHECK(snap[1] == "rho,sigma,value");
    CHECK(snap.size() == std::size_t(2 + 24 * 16));
}

TEST_CASE("sweep then fit: the pipeline reuses its own tables") {
    const std::string dir_a = prep_dir("sweep_a");
    const std::string dir_b = prep_dir("sweep_b");
    const std::string cfg = join2(dir_a, "cfg.json");
    write_text(cfg, R"({
        "case": "partial_henon",
        "alphas": [20, 40],
        "grid": {"n_rho": 24, "n_sigma": 16, "grading": 1.0}
    })");

    REQUIRE(runner::run_command("sweep", opts_for(cfg, dir_a)) == runner::kExitOk);
    for (const char* f :
         {"sweep.csv", "fits.csv", "blowup.dat", "gap.dat",
          "normalized_quotient.dat"})
        CHECK(fs::exists(join2(dir_a, f)));

    // same config, second output directory: byte-identical tables
    REQUIRE(runner::run_command("sweep", opts_for(cfg, dir_b)) == runner::kExitOk);
    CHECK(slurp(join2(dir_a, "sweep.csv")) == slurp(join2(dir_b, "sweep.csv")));
    CHECK(slurp(join2(dir_a, "fits.csv")) == slurp(join2(dir_b, "fits.csv")));

    const auto recs = io::read_sweep_csv(join2(dir_a, "sweep.csv"));
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].alpha == 20.0);
    CHECK(recs[1].alpha == 40.0);
    CHECK(recs[0].converged);
    CHECK(recs[1].converged);

    // refit from the written table
    const std::string fit_dir = prep_dir("fit");
    const std::string fit_cfg = join2(fit_dir, "cfg.json");
    write_text(fit_cfg, R"({"case": "partial_henon", "sweep_csv": ")" +
                            join2(dir_a, "sweep.csv") + R"("})");
    REQUIRE(runner::run_command("fit", opts_for(fit_cfg, fit_dir)) ==
            runner::kExitOk);
    const auto fits = lines_of(slurp(join2(fit_dir, "fits.csv")));
    CHECK(fits[1] == "quantity,slope,intercept,r_squared,target,rel_dev");
    REQUIRE(fits.size() == 5); // provenance + header + three rates
    CHECK(split_csv(fits[2])[0] == "max_value");
    CHECK(split_csv(fits[3])[0] == "quotient");
    CHECK(split_csv(fits[4])[0] == "energy");
}

TEST_CASE("limit respects the truncation gate") {
    const std::string dir = prep_dir("limit");
    const std::string cfg = join2(dir, "cfg.json");
    write_text(cfg, R"({
        "limit": {"gamma": 1.0, "n": 3, "s_max": 8, "t_max": 16,
                  "n_s": 24, "n_t": 48},
        "truncation_threshold": 0.05
    })");
    REQUIRE(runner::run_command("limit", opts_for(cfg, dir)) == runner::kExitOk);
    const auto table = lines_of(slurp(join2(dir, "limit.csv")));
    REQUIRE(table.size() == 3);
    const auto row = split_csv(table[2]);
    REQUIRE(row.size() == 13);
    CHECK(std::stod(row[3]) > 0.0);  // value
    CHECK(row[12] == "1");           // converged
    CHECK(fs::exists(join2(dir, "limit_solution.csv")));
    CHECK(lines_of(slurp(join2(dir, "limit_solution.csv")))[1] == "s,t,value");

    // a box too small for the requested certainty fails, unless tolerated
    const std::string tight = join2(dir, "tight.json");
    write_text(tight, R"({
        "limit": {"gamma": 1.0, "n": 3, "s_max": 2.5, "t_max": 5,
                  "n_s": 12, "n_t": 24},
        "truncation_threshold": 1e-6
    })");
    CHECK(runner::run_command("limit", opts_for(tight, dir)) ==
          runner::kExitNumerical);
    runner::CliOptions tolerant = opts_for(tight, dir);
    tolerant.allow_partial = true;
    CHECK(runner::run_command("limit", tolerant) == runner::kExitOk);
}
