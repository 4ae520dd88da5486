// Exercises the shared-library C surface end to end on a desk-size grid.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "su2stat.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace {

su2stat_config* tiny_config(double g) {
    su2stat_config* cfg = su2stat_config_create();
    REQUIRE(cfg != nullptr);
    CHECK(su2stat_config_set(cfg, "r_max", "32") == SU2STAT_OK);
    CHECK(su2stat_config_set(cfg, "n_r_in", "8") == SU2STAT_OK);
    CHECK(su2stat_config_set(cfg, "n_r_out", "48") == SU2STAT_OK);
    CHECK(su2stat_config_set(cfg, "n_theta", "12") == SU2STAT_OK);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", g);
    CHECK(su2stat_config_set(cfg, "g", buf) == SU2STAT_OK);
    return cfg;
}

}  // namespace

TEST_CASE("version and error reporting") {
    CHECK(su2stat_version() != nullptr);
    CHECK(su2stat_config_load("/no/such/file", nullptr) == SU2STAT_ERR_ARG);
    su2stat_config* out = nullptr;
    CHECK(su2stat_config_load("/no/such/file", &out) == SU2STAT_ERR_CONFIG);
    CHECK(std::strlen(su2stat_last_error()) > 0);
}

TEST_CASE("config keys validate") {
    su2stat_config* cfg = su2stat_config_create();
    CHECK(su2stat_config_set(cfg, "nonsense", "1") == SU2STAT_ERR_CONFIG);
    CHECK(su2stat_config_set(cfg, "g", "abc") == SU2STAT_ERR_CONFIG);
    CHECK(su2stat_config_set(cfg, "g", "6.5") == SU2STAT_OK);
    su2stat_config_destroy(cfg);
}

TEST_CASE("solve, accessors, save/load, verify, plotdata") {
    su2stat_config* cfg = tiny_config(6.0);
    su2stat_solution* sol = nullptr;
    REQUIRE(su2stat_solve(cfg, &sol) == SU2STAT_OK);

    int nr = 0, nt = 0;
    CHECK(su2stat_solution_dims(sol, &nr, &nt) == SU2STAT_OK);
    CHECK(nr == 57);
    CHECK(nt == 12);

    double g = 0;
    CHECK(su2stat_solution_g(sol, &g) == SU2STAT_OK);
    CHECK(g == 6.0);

    double e[5];
    CHECK(su2stat_solution_energy(sol, e) == SU2STAT_OK);
    CHECK(e[4] == doctest::Approx(e[0] + e[1] + e[2] + e[3]).epsilon(1e-12));
    CHECK(e[4] < 3.0 * 36.0 / (40.0 * M_PI));  // supercritical gain

    int iters = 0, conv = 0;
    double gnorm = 0;
    CHECK(su2stat_solution_report(sol, &iters, &gnorm, &conv) == SU2STAT_OK);
    CHECK(conv == 1);
    CHECK(gnorm < 1e-8);

    std::vector<double> alpha(static_cast<size_t>(nr) * nt), psi(alpha.size());
    std::vector<double> r(nr), th(nt);
    CHECK(su2stat_solution_alpha(sol, alpha.data(), alpha.size()) == SU2STAT_OK);
    CHECK(su2stat_solution_psi(sol, psi.data(), psi.size()) == SU2STAT_OK);
    CHECK(su2stat_solution_r_nodes(sol, r.data(), r.size()) == SU2STAT_OK);
    CHECK(su2stat_solution_theta_nodes(sol, th.data(), th.size()) == SU2STAT_OK);
    CHECK(su2stat_solution_alpha(sol, alpha.data(), 3) == SU2STAT_ERR_ARG);
    for (double v : psi) CHECK(v > 0.0);

    double asym[6];
    CHECK(su2stat_solution_asymptotics(sol, asym) == SU2STAT_OK);
    CHECK(asym[0] > 0.0);  // e0

    double scr[3];
    CHECK(su2stat_solution_screening(sol, scr) == SU2STAT_OK);
    CHECK(scr[0] > 0.0);

    const char* path = "/tmp/su2stat_capi_sol.json";
    CHECK(su2stat_solution_save(sol, path) == SU2STAT_OK);
    su2stat_solution* loaded = nullptr;
    CHECK(su2stat_solution_load(path, &loaded) == SU2STAT_OK);

    char report[4096];
    CHECK(su2stat_solution_verify(loaded, report, sizeof(report)) == SU2STAT_OK);
    CHECK(std::string(report).find("pass") != std::string::npos);

    CHECK(su2stat_solution_plotdata(loaded, "psi-tail", "/tmp/su2stat_capi_plot.dat", 10.0) ==
          SU2STAT_OK);
    CHECK(su2stat_solution_plotdata(loaded, "bogus", "/tmp/x.dat", 10.0) == SU2STAT_ERR_CONFIG);

    char summary[2048];
    CHECK(su2stat_solution_summary(sol, summary, sizeof(summary)) == SU2STAT_OK);
    CHECK(std::string(summary).find("energy total") != std::string::npos);

    su2stat_solution_destroy(sol);
    su2stat_solution_destroy(loaded);
    su2stat_config_destroy(cfg);
}

TEST_CASE("corrupted file fails verification with the verify status") {
    su2stat_config* cfg = tiny_config(6.0);
    su2stat_solution* sol = nullptr;
    REQUIRE(su2stat_solve(cfg, &sol) == SU2STAT_OK);
    const char* path = "/tmp/su2stat_capi_bad.json";
    REQUIRE(su2stat_solution_save(sol, path) == SU2STAT_OK);
    su2stat_solution_destroy(sol);
    su2stat_config_destroy(cfg);

    // flip one digit inside the alpha array
    std::ifstream is(path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    is.close();
    const auto pos = text.find("\"alpha\":[");
    REQUIRE(pos != std::string::npos);
    auto digit = text.find_first_of("123456789", pos + 12);
    REQUIRE(digit != std::string::npos);
    text[digit] = (text[digit] == '9') ? '1' : '9';
    std::ofstream os(path, std::ios::binary);
    os << text;
    os.close();

    su2stat_solution* bad = nullptr;
    REQUIRE(su2stat_solution_load(path, &bad) == SU2STAT_OK);
    char report[4096];
    CHECK(su2stat_solution_verify(bad, report, sizeof(report)) == SU2STAT_ERR_VERIFY);
    su2stat_solution_destroy(bad);
}

TEST_CASE("sweep and stability drivers write CSV") {
    su2stat_config* cfg = tiny_config(6.0);
    CHECK(su2stat_config_set(cfg, "g", "") == SU2STAT_ERR_CONFIG);  // cannot blank g
    su2stat_config_destroy(cfg);

    su2stat_config* sw = su2stat_config_create();
    su2stat_config_set(sw, "r_max", "32");
    su2stat_config_set(sw, "n_r_in", "8");
    su2stat_config_set(sw, "n_r_out", "48");
    su2stat_config_set(sw, "n_theta", "12");
    su2stat_config_set(sw, "g_list", "3,6");
    const char* csv = "/tmp/su2stat_capi_sweep.csv";
    CHECK(su2stat_sweep(sw, csv) == SU2STAT_OK);
    std::ifstream is(csv);
    std::string head;
    std::getline(is, head);
    CHECK(head.rfind("g,E_total", 0) == 0);

    su2stat_config_set(sw, "scan_lo", "3.5");
    su2stat_config_set(sw, "scan_hi", "5.5");
    su2stat_config_set(sw, "scan_steps", "5");
    double g0 = 0;
    CHECK(su2stat_stability_scan(sw, "/tmp/su2stat_capi_stab.csv", &g0) == SU2STAT_OK);
    CHECK(g0 > 4.0);
    CHECK(g0 < 5.0);
    su2stat_config_destroy(sw);
}

TEST_CASE("coulomb baseline text") {
    char buf[1024];
    CHECK(su2stat_coulomb_info(buf, sizeof(buf)) == SU2STAT_OK);
    const std::string s(buf);
    CHECK(s.find("0.0238732") != std::string::npos);  // 3/(40 pi)
    CHECK(s.find("4.3416") != std::string::npos);     // sqrt(6 pi)
}
