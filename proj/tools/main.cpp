// su2stat command-line driver. Talks to the solver library exclusively
// through the public C API in su2stat.h.

#include "su2stat.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

int status_to_exit(su2stat_status st) {
    switch (st) {
        case SU2STAT_OK: return 0;
        case SU2STAT_ERR_CONFIG: return 2;
        case SU2STAT_ERR_ARG: return 2;
        case SU2STAT_ERR_SOLVER: return 3;
        case SU2STAT_ERR_VERIFY: return 4;
        case SU2STAT_ERR_IO: return 2;
    }
    return 2;
}

int fail(su2stat_status st) {
    std::fprintf(stderr, "error: %s\n", su2stat_last_error());
    return status_to_exit(st);
}

struct CommonOpts {
    std::string config;
    std::string g;
    std::string g_list;
    std::string out;
    std::string seed_policy;
    std::string rng_seed;
    std::string workers;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--config", o.config, "key = value config file");
    app->add_option("--g", o.g, "coupling constant");
    app->add_option("--g-list", o.g_list, "comma-separated couplings");
    app->add_option("--out", o.out, "output path");
    app->add_option("--seed-policy", o.seed_policy,
                    "zero | hessian-direction | trial-field | random | file");
    app->add_option("--rng-seed", o.rng_seed, "RNG seed (determinism contract)");
    app->add_option("--workers", o.workers, "sweep worker count");
}

su2stat_status make_config(const CommonOpts& o, su2stat_config** out) {
    su2stat_config* cfg = nullptr;
    if (!o.config.empty()) {
        const su2stat_status st = su2stat_config_load(o.config.c_str(), &cfg);
        if (st != SU2STAT_OK) return st;
    } else {
        cfg = su2stat_config_create();
    }
    auto set = [&](const char* k, const std::string& v) {
        return v.empty() ? SU2STAT_OK : su2stat_config_set(cfg, k, v.c_str());
    };
    su2stat_status st = SU2STAT_OK;
    if (st == SU2STAT_OK) st = set("g", o.g);
    if (st == SU2STAT_OK) st = set("g_list", o.g_list);
    if (st == SU2STAT_OK) st = set("out", o.out);
    if (st == SU2STAT_OK) st = set("seed_policy", o.seed_policy);
    if (st == SU2STAT_OK) st = set("rng_seed", o.rng_seed);
    if (st == SU2STAT_OK) st = set("workers", o.workers);
    if (st != SU2STAT_OK) {
        su2stat_config_destroy(cfg);
        return st;
    }
    *out = cfg;
    return SU2STAT_OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"su2stat: minimizer and diagnostics for the reduced SU(2) "
                 "electro/magneto-static energy of a uniformly charged ball"};
    app.require_subcommand(1);

    CommonOpts solve_o, sweep_o, stab_o;
    std::string verify_path, plot_file, plot_which, plot_out;
    double plot_at_r = 10.0;
    std::string stab_lo, stab_hi, stab_steps;

    CLI::App* solve = app.add_subcommand("solve", "minimize at a single coupling");
    add_common(solve, solve_o);

    CLI::App* sweep = app.add_subcommand("sweep", "continuation sweep over g_list (CSV out)");
    add_common(sweep, sweep_o);

    CLI::App* stab = app.add_subcommand("stability", "Hessian threshold scan (CSV out)");
    add_common(stab, stab_o);
    stab->add_option("--lo", stab_lo, "scan lower coupling");
    stab->add_option("--hi", stab_hi, "scan upper coupling");
    stab->add_option("--steps", stab_steps, "scan sample count");

    CLI::App* verify = app.add_subcommand("verify", "re-run the identity suite on a file");
    verify->add_option("file", verify_path, "solution JSON file")->required();

    CLI::App* plot = app.add_subcommand("plotdata", "emit plain-text plot data");
    plot->add_option("file", plot_file, "solution JSON file")->required();
    plot->add_option("which", plot_which,
                     "psi-tail | alpha-tail | energy-density | theta-profile")
        ->required();
    plot->add_option("--out", plot_out, "output path (default <which>.dat)");
    plot->add_option("--at-r", plot_at_r, "radius for theta-profile");

    CLI::App* coulomb = app.add_subcommand("coulomb", "print closed-form baseline numbers");
    (void)coulomb;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (solve->parsed()) {
        su2stat_config* cfg = nullptr;
        su2stat_status st = make_config(solve_o, &cfg);
        if (st != SU2STAT_OK) return fail(st);
        su2stat_solution* sol = nullptr;
        st = su2stat_solve(cfg, &sol);
        if (st != SU2STAT_OK && sol == nullptr) {
            su2stat_config_destroy(cfg);
            return fail(st);
        }
        char summary[2048];
        su2stat_solution_summary(sol, summary, sizeof(summary));
        std::fputs(summary, stdout);
        const std::string out = solve_o.out.empty() ? "solution.json" : solve_o.out;
        const su2stat_status save_st = su2stat_solution_save(sol, out.c_str());
        if (save_st != SU2STAT_OK) {
            su2stat_solution_destroy(sol);
            su2stat_config_destroy(cfg);
            return fail(save_st);
        }
        std::printf("wrote %s\n", out.c_str());
        su2stat_solution_destroy(sol);
        su2stat_config_destroy(cfg);
        return st == SU2STAT_OK ? 0 : fail(st);
    }

    if (sweep->parsed()) {
        su2stat_config* cfg = nullptr;
        su2stat_status st = make_config(sweep_o, &cfg);
        if (st != SU2STAT_OK) return fail(st);
        const std::string out = sweep_o.out.empty() ? "sweep.csv" : sweep_o.out;
        st = su2stat_sweep(cfg, out.c_str());
        su2stat_config_destroy(cfg);
        if (st != SU2STAT_OK) return fail(st);
        std::printf("wrote %s\n", out.c_str());
        return 0;
    }

    if (stab->parsed()) {
        su2stat_config* cfg = nullptr;
        su2stat_status st = make_config(stab_o, &cfg);
        if (st != SU2STAT_OK) return fail(st);
        auto set = [&](const char* k, const std::string& v) {
            return v.empty() ? SU2STAT_OK : su2stat_config_set(cfg, k, v.c_str());
        };
        if ((st = set("scan_lo", stab_lo)) != SU2STAT_OK ||
            (st = set("scan_hi", stab_hi)) != SU2STAT_OK ||
            (st = set("scan_steps", stab_steps)) != SU2STAT_OK) {
            su2stat_config_destroy(cfg);
            return fail(st);
        }
        const std::string out = stab_o.out.empty() ? "stability.csv" : stab_o.out;
        double g0 = 0;
        st = su2stat_stability_scan(cfg, out.c_str(), &g0);
        su2stat_config_destroy(cfg);
        if (st != SU2STAT_OK) return fail(st);
        if (g0 == g0)
            std::printf("g0_estimate = %.6f\nwrote %s\n", g0, out.c_str());
        else
            std::printf("no crossing in range\nwrote %s\n", out.c_str());
        return 0;
    }

    if (verify->parsed()) {
        su2stat_solution* sol = nullptr;
        su2stat_status st = su2stat_solution_load(verify_path.c_str(), &sol);
        if (st != SU2STAT_OK) return fail(st);
        char report[4096];
        st = su2stat_solution_verify(sol, report, sizeof(report));
        std::fputs(report, stdout);
        su2stat_solution_destroy(sol);
        if (st != SU2STAT_OK) {
            std::fprintf(stderr, "verification FAILED\n");
            return status_to_exit(st);
        }
        std::printf("all identities pass\n");
        return 0;
    }

    if (plot->parsed()) {
        su2stat_solution* sol = nullptr;
        su2stat_status st = su2stat_solution_load(plot_file.c_str(), &sol);
        if (st != SU2STAT_OK) return fail(st);
        const std::string out = plot_out.empty() ? (plot_which + ".dat") : plot_out;
        st = su2stat_solution_plotdata(sol, plot_which.c_str(), out.c_str(), plot_at_r);
        su2stat_solution_destroy(sol);
        if (st != SU2STAT_OK) return fail(st);
        std::printf("wrote %s\n", out.c_str());
        return 0;
    }

    if (coulomb->parsed()) {
        char buf[1024];
        su2stat_coulomb_info(buf, sizeof(buf));
        std::fputs(buf, stdout);
        return 0;
    }

    return 2;
}
