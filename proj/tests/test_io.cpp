#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/solution_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace su2stat;

namespace {

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/su2stat_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    os << text;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig tiny_config(double g) {
    RunConfig cfg;
    cfg.grid.r_max = 32.0;
    cfg.grid.n_r_in = 8;
    cfg.grid.n_r_out = 48;
    cfg.grid.n_theta = 12;
    cfg.has_g = true;
    cfg.g = g;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
    const std::string path = tmp_path("cfg1.txt");
    write_file(path,
               "# comment\n"
               "r_max = 64\n"
               "n_r_in = 16     # inline comment\n"
               "n_r_out = 96\n"
               "n_theta = 24\n"
               "g = 12.5\n"
               "seed_policy = trial-field\n"
               "rng_seed = 7\n"
               "lin_tol = 1e-11\n");
    RunConfig cfg = RunConfig::from_file(path);
    CHECK(cfg.grid.r_max == 64.0);
    CHECK(cfg.grid.n_r_in == 16);
    CHECK(cfg.g == 12.5);
    CHECK(cfg.has_g);
    CHECK(cfg.seed_policy == SeedPolicy::TrialField);
    CHECK(cfg.rng_seed == 7);
    CHECK(cfg.lin_tol == 1e-11);
    CHECK_NOTHROW(cfg.validate_for_solve());

    write_file(path, "bogus_key = 3\n");
    CHECK_THROWS_AS(RunConfig::from_file(path), ConfigError);
    write_file(path, "r_max 64\n");
    CHECK_THROWS_AS(RunConfig::from_file(path), ConfigError);
    write_file(path, "g = twelve\n");
    CHECK_THROWS_AS(RunConfig::from_file(path), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_file(tmp_path("missing.txt")), ConfigError);
}

TEST_CASE("config invariants: exactly one of g / g_list") {
    RunConfig cfg = tiny_config(5.0);
    CHECK_NOTHROW(cfg.validate_for_solve());
    CHECK_THROWS_AS(cfg.validate_for_sweep(), ConfigError);

    cfg.g_list = {1.0, 2.0};
    CHECK_THROWS_AS(cfg.validate_for_solve(), ConfigError);
    cfg.has_g = false;
    CHECK_NOTHROW(cfg.validate_for_sweep());
    cfg.g_list = {2.0, 1.0};
    CHECK_THROWS_AS(cfg.validate_for_sweep(), ConfigError);
    cfg.g_list.clear();
    CHECK_THROWS_AS(cfg.validate_for_sweep(), ConfigError);  // empty list: usage error
}

TEST_CASE("double list parsing") {
    auto v = parse_double_list("1, 2.5,3e1");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 2.5);
    CHECK(v[2] == 30.0);
}

TEST_CASE("solution file round trip is lossless and byte-identical") {
    RunConfig cfg = tiny_config(6.0);
    SolutionFile sf = run_solve(cfg);
    CHECK(sf.solution.report.converged);

    const std::string p1 = tmp_path("sol1.json"), p2 = tmp_path("sol2.json");
    save_solution_file(sf, p1);
    SolutionFile loaded = load_solution_file(p1);
    CHECK(loaded.solution.alpha.v == sf.solution.alpha.v);
    CHECK(loaded.solution.psi.psi.v == sf.solution.psi.psi.v);
    CHECK(loaded.solution.g == sf.solution.g);
    CHECK(loaded.checksum == sf.checksum);
    CHECK(loaded.asymptotics.e0 == sf.asymptotics.e0);

    save_solution_file(loaded, p2);
    CHECK(read_file(p1) == read_file(p2));  // save-load-save byte identity
}

TEST_CASE("determinism: identical config gives byte-identical outputs") {
    RunConfig cfg = tiny_config(6.0);
    cfg.seed_policy = SeedPolicy::Random;
    cfg.rng_seed = 99;
    SolutionFile a = run_solve(cfg);
    SolutionFile b = run_solve(cfg);
    const std::string pa = tmp_path("det_a.json"), pb = tmp_path("det_b.json");
    save_solution_file(a, pa);
    save_solution_file(b, pb);
    CHECK(read_file(pa) == read_file(pb));
    CHECK(a.checksum == b.checksum);
}

TEST_CASE("verification suite: fresh pass, corrupted controls fail") {
    RunConfig cfg = tiny_config(6.0);
    SolutionFile sf = run_solve(cfg);

    VerifyReport rep = verify_solution_file(sf);
    CHECK(rep.checksum_ok);
    CHECK(rep.all_pass);
    for (const auto& id : rep.identities) CHECK(id.pass);

    SUBCASE("corrupted alpha breaks the checksum") {
        SolutionFile bad = sf;
        bad.solution.alpha.v[bad.solution.alpha.v.size() / 2] *= 1.1;
        VerifyReport r2 = verify_solution_file(bad);
        CHECK_FALSE(r2.checksum_ok);
        CHECK_FALSE(r2.all_pass);
    }

    SUBCASE("corrupted alpha with a recomputed checksum fails the virial identity") {
        SolutionFile bad = sf;
        Grid grid(bad.grid_spec);
        // non-uniform corruption: a uniform rescale would preserve the balance
        for (int i = grid.ball_index() + 1; i < grid.nr(); ++i) {
            const double r = grid.r_nodes()[i];
            if (r < 2.0 || r > 4.0) continue;
            for (int j = 0; j < grid.ntheta(); ++j) bad.solution.alpha.v[grid.at(i, j)] *= 2.0;
        }
        bad.checksum = payload_checksum(grid, bad.solution);
        VerifyReport r2 = verify_solution_file(bad);
        CHECK(r2.checksum_ok);
        bool virial_failed = false;
        for (const auto& id : r2.identities)
            if (id.name == "identity_14_virial" && !id.pass) virial_failed = true;
        CHECK(virial_failed);
        CHECK_FALSE(r2.all_pass);
    }

    SUBCASE("coulomb file: identities hold, virial reads 0 = 0") {
        RunConfig sub = tiny_config(3.0);  // subcritical: collapses to Coulomb
        SolutionFile cf = run_solve(sub);
        VerifyReport r3 = verify_solution_file(cf);
        CHECK(r3.all_pass);
    }
}

TEST_CASE("plot data emission") {
    RunConfig cfg = tiny_config(6.0);
    SolutionFile sf = run_solve(cfg);

    for (const std::string which :
         {"psi-tail", "alpha-tail", "energy-density", "theta-profile"}) {
        const std::string p = tmp_path("plot_" + which + ".dat");
        write_plotdata(sf, which, p, 10.0);
        const std::string text = read_file(p);
        CHECK(text.find('#') == 0);
        CHECK(text.size() > 50);
    }
    CHECK_THROWS_AS(write_plotdata(sf, "nonsense", tmp_path("x.dat"), 10.0), ConfigError);

    // psi-tail of a subcritical (Coulomb) solution is flat at 1/(4 pi)
    RunConfig sub = tiny_config(3.0);
    SolutionFile cf = run_solve(sub);
    const std::string p = tmp_path("plot_coul.dat");
    write_plotdata(cf, "psi-tail", p, 10.0);
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);  // header
    int rows = 0;
    while (std::getline(is, line)) {
        double r, rpsi;
        REQUIRE(std::sscanf(line.c_str(), "%lf %lf", &r, &rpsi) == 2);
        CHECK(rpsi == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(2e-3));
        ++rows;
    }
    CHECK(rows > 10);
}

TEST_CASE("sweep rows and CSV shape") {
    RunConfig cfg = tiny_config(0);
    cfg.has_g = false;
    cfg.g_list = {3.0, 6.0};
    auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ok);
    CHECK(rows[1].ok);
    // subcritical row: small excess; supercritical: strictly positive gain
    CHECK(rows[1].excess > 0.0);
    CHECK(rows[1].energy.total < 3.0 * 36.0 / (40.0 * M_PI));

    const std::string csv = sweep_csv(rows);
    CHECK(csv.find("g,E_total,E_magnetic,E_el_in,E_el_out,E_interaction,excess,e0,p0_fit,"
                   "p0_formula,shell_fraction,sigma0,iterations") == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 3);  // header + 2 rows
}

TEST_CASE("seed policy construction") {
    RunConfig cfg = tiny_config(6.0);
    Grid grid(cfg.grid);
    cfg.seed_policy = SeedPolicy::Zero;
    Field z = build_seed(cfg, grid);
    for (double v : z.v) CHECK(v == 0.0);
    cfg.seed_policy = SeedPolicy::File;
    cfg.seed_file = tmp_path("noexist.json");
    CHECK_THROWS(build_seed(cfg, grid));
}
