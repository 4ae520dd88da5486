// Acceptance suite: runs every release criterion on the production grid and
#include <cstdarg>
// prints one pass/fail line per criterion. Exit code is the number of
// failures.

#include "core/asymptotics.hpp"
#include "core/inequalities.hpp"
#include "core/solution_io.hpp"
#include "core/stability.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace su2stat;

namespace {

int g_failures = 0;
int g_index = 0;

void report(bool pass, const std::string& what) {
    ++g_index;
    std::printf("[%2d] %s  %s\n", g_index, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

struct Lab {
    GridSpec spec;           // production grid
    Grid grid{GridSpec{}};
    std::map<double, Solution> solutions;
    double lin_tol = 1e-12;

    Lab() : grid(spec) {}

    const Solution& solve(double gv) {
        auto it = solutions.find(gv);
        if (it != solutions.end()) return it->second;
        EnergyModel model(grid, Coupling(gv), lin_tol);
        MinimizeOptions opts;
        Solution sol = minimize(model, hessian_seed(grid), opts);
        return solutions.emplace(gv, std::move(sol)).first->second;
    }
};

// Smooth random perturbation for the finite-difference check (rough
// directions starve the FD signal at the stated steps).
std::vector<double> fd_direction(const EnergyModel& model, std::uint64_t seed) {
    const Grid& g = model.grid();
    const int nt = g.ntheta(), nro = model.gauge().nro(), i0 = g.ball_index();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int K = 3, M = 3;
    std::vector<double> c(static_cast<std::size_t>(K) * M);
    for (auto& v : c) v = U(rng);
    std::vector<double> d(static_cast<std::size_t>(nro) * nt, 0.0);
    for (int I = 1; I + 1 < nro; ++I) {
        const double r = g.r_nodes()[i0 + I];
        for (int j = 0; j < nt; ++j) {
            const double th = g.theta_nodes()[j];
            const double s = std::sin(th), co = std::cos(th);
            const double S[3] = {s, s * co, s * s * s};
            double v = 0.0;
            for (int k = 1; k <= K; ++k) {
                const double R = (1.0 - std::exp(-k * (r - 1.0))) * std::exp(-r / (3.0 * k));
                for (int m = 0; m < M; ++m) v += c[(k - 1) * M + m] * R * S[m];
            }
            d[static_cast<std::size_t>(I) * nt + j] = v;
        }
    }
    return d;
}

double run_threshold(const GridSpec& spec) {
    Grid g(spec);
    StabilityReport rep = threshold_scan(3.5, 5.5, 9, g);
    if (!rep.crossing_found) throw SolverError("no threshold crossing in [3.5, 5.5]");
    return rep.g0_estimate;
}

}  // namespace

int main() {
    std::printf("su2stat acceptance suite (grid r_max=128, 32/256 radial, 48 theta)\n");
    Lab lab;
    const double g0_exact = std::sqrt(6.0 * M_PI);

    // ---- 1: Coulomb regression -----------------------------------------
    try {
        ElectroSolver es(lab.grid, ChargeModel::uniform_ball(lab.grid));
        Field zero(lab.grid, Support::OutsideBall);
        ElectricPotential p = es.solve_psi(zero, lab.lin_tol);
        double max_err = 0;
        for (int i = 0; i < lab.grid.nr(); ++i) {
            const double exact = coulomb_psi_value(lab.grid.r_nodes()[i]);
            for (int j = 0; j < lab.grid.ntheta(); ++j)
                max_err = std::max(max_err,
                                   std::abs(p.psi.v[lab.grid.at(i, j)] - exact));
        }
        EnergyModel m1(lab.grid, Coupling(1.0), lab.lin_tol);
        const double e0_total = m1.reduced_energy(zero).total;
        const double ref = 3.0 / (40.0 * M_PI);
        const bool pass = max_err < 1e-3 && std::abs(e0_total - ref) / ref < 5e-3;
        report(pass, fmt("Coulomb regression: max|psi err| = %.2e (<1e-3), "
                         "E(0,g=1) = %.7f vs 3/(40pi) = %.7f (%.3f%%)",
                         max_err, e0_total, ref, 100 * std::abs(e0_total - ref) / ref));
    } catch (const std::exception& e) {
        report(false, fmt("Coulomb regression: %s", e.what()));
    }

    // ---- 2: threshold location and refinement --------------------------
    try {
        const double g0_coarse = run_threshold(lab.spec);
        const double err_coarse = std::abs(g0_coarse - g0_exact) / g0_exact;
        const double g0_fine = run_threshold(lab.spec.refined());
        const double err_fine = std::abs(g0_fine - g0_exact) / g0_exact;
        const bool pass = err_coarse < 0.05 && err_fine < err_coarse;
        report(pass, fmt("threshold: g0 = %.4f (ref %.4f, err %.2f%%), refined g0 = %.4f "
                         "(err %.2f%%, decreased: %s)",
                         g0_coarse, g0_exact, 100 * err_coarse, g0_fine, 100 * err_fine,
                         err_fine < err_coarse ? "yes" : "no"));
    } catch (const std::exception& e) {
        report(false, fmt("threshold: %s", e.what()));
    }

    // ---- 3: subcritical collapse ----------------------------------------
    try {
        bool pass = true;
        std::string detail;
        for (double gv : {2.0, 3.0, 4.0}) {
            const Solution& s = lab.solve(gv);
            double sup = 0;
            for (double v : s.alpha.v) sup = std::max(sup, std::abs(v));
            const double ref = 3.0 * gv * gv / (40.0 * M_PI);
            const double rel = std::abs(s.energy.total - ref) / ref;
            pass = pass && s.report.converged && sup < 1e-6 && rel < 5e-3;
            detail += fmt("g=%g: sup|a|=%.1e rel_dE=%.1e  ", gv, sup, rel);
        }
        report(pass, "subcritical collapse: " + detail);
    } catch (const std::exception& e) {
        report(false, fmt("subcritical collapse: %s", e.what()));
    }

    // ---- 4: supercritical gain and the linear-correction band -----------
    try {
        bool pass = true;
        std::string detail;
        for (double gv : {6.0, 10.0, 20.0, 40.0}) {
            const Solution& s = lab.solve(gv);
            pass = pass && s.report.converged &&
                   s.energy.total < 3.0 * gv * gv / (40.0 * M_PI);
        }
        double lo = 1e300, hi = 0;
        for (double gv : {10.0, 20.0, 40.0}) {
            const Solution& s = lab.solve(gv);
            const double excess =
                (kEnergyNormDoubled * s.energy.total - gv * gv / (40.0 * M_PI)) / gv;
            pass = pass && excess > 0;
            lo = std::min(lo, excess);
            hi = std::max(hi, excess);
            detail += fmt("g=%g: excess=%.4f  ", gv, excess);
        }
        pass = pass && hi / lo <= 4.0;
        report(pass, fmt("supercritical gain: %s band ratio %.2f (<=4)", detail.c_str(),
                         hi / lo));
    } catch (const std::exception& e) {
        report(false, fmt("supercritical gain: %s", e.what()));
    }

    // ---- 5: identities at convergence (g = 20) --------------------------
    try {
        const Solution& s = lab.solve(20.0);
        EnergyModel model(lab.grid, Coupling(20.0), lab.lin_tol);
        const auto& psi = s.psi.psi;

        double din = 0, dout = 0;
        model.electro().stencil().energy_split(psi.v.data(), &din, &dout);
        const auto V = model.electro().potential_diag(s.alpha);
        double inter = 0, rho_psi = 0;
        for (std::size_t k = 0; k < lab.grid.size(); ++k) {
            inter += lab.grid.w_vol()[k] * V[k] * psi.v[k] * psi.v[k];
            rho_psi += model.electro().charge().cell_charge[k] * psi.v[k];
        }
        const double id13 = std::abs(din + dout + inter - rho_psi) / rho_psi;

        const auto a = model.pack_outer(s.alpha);
        const double mag = model.gauge().energy(a.data()) / 400.0;
        const double id14 = std::abs(mag - 400.0 * inter) / std::max(mag, 400.0 * inter);

        const auto diag = model.electro().diagnostics(s.alpha, s.psi);
        const bool q55 = diag.screened_charge <= 1.0 + 1e-9 && diag.screened_charge > 0;
        const bool q53 = diag.sphere_avg_decreasing;

        const double slack = 5.0 * lab.grid.h_nominal() * lab.grid.h_nominal() *
                             coulomb_psi_value(0.0);
        double worst = -1e300;
        for (int i = 0; i < lab.grid.nr(); ++i) {
            const double lo = psi_dirichlet_value(lab.grid.r_nodes()[i]);
            const double hi = coulomb_psi_value(lab.grid.r_nodes()[i]);
            for (int j = 0; j < lab.grid.ntheta(); ++j) {
                const double v = psi.v[lab.grid.at(i, j)];
                worst = std::max(worst, std::max(lo - v, v - hi));
            }
        }
        const bool pass = id13 < 1e-3 && id14 < 1e-3 && q55 && q53 && worst < slack;
        report(pass, fmt("identities at g=20: (13) %.1e, (14) %.1e (<1e-3); "
                         "int|a|^2 psi = %.4f (<=1); sphere-avg monotone: %s; "
                         "sandwich slack %.1e (<%.1e)",
                         id13, id14, diag.screened_charge, q53 ? "yes" : "no", worst,
                         slack));
    } catch (const std::exception& e) {
        report(false, fmt("identities: %s", e.what()));
    }

    // ---- 6: gradient correctness ----------------------------------------
    try {
        bool pass = true;
        double worst = 0;
        for (double gv : {5.0, 20.0}) {
            EnergyModel model(lab.grid, Coupling(gv), 1e-10);
            Field base = random_seed(lab.grid, 314159, 0.5);
            const auto a0 = model.pack_outer(base);
            ElectricPotential psi = model.solve_psi(base);
            const auto gvec = model.gradient_vector(base, psi);
            const double E0 = model.reduced_energy(base, psi).total;

            for (int dir_i = 0; dir_i < 20; ++dir_i) {
                std::vector<double> dir = fd_direction(model, 7000 + 13 * dir_i);
                double analytic = 0;
                for (std::size_t k = 0; k < dir.size(); ++k) analytic += gvec[k] * dir[k];
                const double scale = 0.25 * (1.0 + std::abs(E0)) / std::abs(analytic);
                for (auto& v : dir) v *= scale;
                analytic *= scale;
                auto energy_at = [&](double t) {
                    std::vector<double> av = a0;
                    for (std::size_t k = 0; k < av.size(); ++k) av[k] += t * dir[k];
                    return model.reduced_energy(model.unpack_outer(av)).total;
                };
                const double d1 = (energy_at(1e-5) - energy_at(-1e-5)) / 2e-5;
                const double d2 = (energy_at(1e-6) - energy_at(-1e-6)) / 2e-6;
                const double rich = (100.0 * d2 - d1) / 99.0;
                const double rel = std::abs(rich - analytic) / std::abs(analytic);
                worst = std::max(worst, rel);
                pass = pass && rel < 1e-6;
            }
        }
        report(pass, fmt("gradient vs central differences: worst rel err %.2e (<1e-6) "
                         "over 20 directions at g=5 and g=20",
                         worst));
    } catch (const std::exception& e) {
        report(false, fmt("gradient check: %s", e.what()));
    }

    // ---- 7: uniqueness probe --------------------------------------------
    try {
        EnergyModel model(lab.grid, Coupling(20.0), lab.lin_tol);
        MinimizeOptions opts;
        std::vector<Solution> sols;
        for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
            sols.push_back(minimize(model, random_seed(lab.grid, seed), opts));
        bool pass = true;
        double e_spread = 0, a_spread = 0;
        for (std::size_t k = 0; k < sols.size(); ++k) {
            pass = pass && sols[k].report.converged;
            const double rel = std::abs(sols[k].energy.total - sols[0].energy.total) /
                               std::abs(sols[0].energy.total);
            e_spread = std::max(e_spread, rel);
            double sup = 0;
            for (std::size_t i = 0; i < sols[k].alpha.v.size(); ++i)
                sup = std::max(sup, std::abs(sols[k].alpha.v[i] - sols[0].alpha.v[i]));
            a_spread = std::max(a_spread, sup);
        }
        pass = pass && e_spread < 1e-6 && a_spread < 1e-4;
        report(pass, fmt("uniqueness: 5 seeds at g=20, energy spread %.1e (<1e-6), "
                         "alpha sup spread %.1e (<1e-4)",
                         e_spread, a_spread));
    } catch (const std::exception& e) {
        report(false, fmt("uniqueness: %s", e.what()));
    }

    // ---- 8: asymptotics consistency --------------------------------------
    try {
        const Solution& s20 = lab.solve(20.0);
        const Solution& s40 = lab.solve(40.0);
        AsymptoticsReport r20 = analyze_asymptotics(s20, lab.grid, {});
        AsymptoticsReport r40 = analyze_asymptotics(s40, lab.grid, {});
        const double diff = std::abs(r20.p0_fit - r20.p0_formula);
        const bool pass = r20.valid && diff <= 0.05 && r20.e0 > 0 && r20.e0 <= 1.0 &&
                          r40.e0 > 0 && r40.e0 < r20.e0;
        report(pass, fmt("asymptotics at g=20: e0=%.4f, p0_fit=%.4f, p0_formula=%.4f "
                         "(|diff|=%.3f<=0.05); e0(40)=%.5f < e0(20)",
                         r20.e0, r20.p0_fit, r20.p0_formula, diff, r40.e0));
    } catch (const std::exception& e) {
        report(false, fmt("asymptotics: %s", e.what()));
    }

    // ---- 9: screening cross-check ----------------------------------------
    try {
        const Solution& s = lab.solve(20.0);
        EnergyModel model(lab.grid, Coupling(20.0), lab.lin_tol);
        const double rm = lab.spec.r_max;
        ScreeningFunction sg = model.electro().solve_screening(
            s.alpha, {rm / 8.0, rm / 4.0, rm / 2.0}, 1e-10);
        const double e0 = fit_e0(s, lab.grid, {});
        const double base = std::sqrt(2.0) * e0 / 400.0;
        const double r_plain = sg.sigma_origin / base;
        const double r_4pi = sg.sigma_origin / (4.0 * M_PI * base);
        const bool plain_ok = std::abs(r_plain - 1.0) <= 0.10;
        const bool pi_ok = std::abs(r_4pi - 1.0) <= 0.10;
        const bool pass = sg.monotone_in_R && (plain_ok || pi_ok);
        report(pass, fmt("screening: sigma(0)=%.5g; sigma0/(sqrt2 e0 g^-2)=%.3f, "
                         "sigma0/(4pi sqrt2 e0 g^-2)=%.3f -> matches the %s "
                         "normalization; sigma_R monotone: %s",
                         sg.sigma_origin, r_plain, r_4pi,
                         pi_ok ? "4pi*sqrt2" : (plain_ok ? "sqrt2" : "neither"),
                         sg.monotone_in_R ? "yes" : "no"));
    } catch (const std::exception& e) {
        report(false, fmt("screening: %s", e.what()));
    }

    // ---- 10: eigenvalue oracle -------------------------------------------
    try {
        GridSpec os;
        os.r_max = 128.0;
        os.n_r_in = 16;
        os.n_r_out = 64;
        os.n_theta = 16;
        Grid og(os);
        bool pass = true;
        std::string detail;
        for (double gv : {4.0, 5.0}) {
            const double dense = dense_min_eigenvalue(Coupling(gv), og);
            EigenResult it = min_eigenvalue(Coupling(gv), og);
            const bool sign_ok = (dense > 0) == (it.lambda_min > 0);
            const bool expected = (gv == 4.0) ? dense > 0 : dense < 0;
            pass = pass && sign_ok && expected && it.converged;
            detail += fmt("g=%g: dense=%.3e iter=%.3e  ", gv, dense, it.lambda_min);
        }
        report(pass, "eigen oracle (64x16 dense vs iterative): " + detail);
    } catch (const std::exception& e) {
        report(false, fmt("eigen oracle: %s", e.what()));
    }

    // ---- 11: closed-form kappa oracle ------------------------------------
    try {
        bool pass = true;
        double worst = 0;
        const Coupling gc(20.0);
        for (int k = 0; k < 20; ++k) {
            const double kappa = 0.02 * std::pow(1.6, k) - 0.02;  // 0 .. ~220
            KappaClosedForm cf = u_kappa_closed_form(kappa, gc, 1.0, lab.grid);
            const double rel = std::abs(cf.f_quadrature - cf.f_value) / cf.f_value;
            worst = std::max(worst, rel);
            pass = pass && rel < 1e-8;
        }
        const double limit_err =
            std::abs(kappa_f_value(1e9, 20.0, 1.0) - 1.0 / (40.0 * M_PI)) *
            (40.0 * M_PI);
        pass = pass && limit_err < 1e-4;
        report(pass, fmt("kappa closed form: worst |f - quadrature| rel %.1e (<1e-8) over "
                         "20 kappa; limit err %.1e (<1e-4)",
                         worst, limit_err));
    } catch (const std::exception& e) {
        report(false, fmt("kappa closed form: %s", e.what()));
    }

    // ---- 12: shell concentration -----------------------------------------
    try {
        bool pass = true;
        std::string detail;
        for (double gv : {20.0, 40.0}) {
            const Solution& s = lab.solve(gv);
            EnergyModel model(lab.grid, Coupling(gv), lab.lin_tol);
            const auto a = model.pack_outer(s.alpha);
            const double g2 = gv * gv;
            const double L = std::log1p(5.0 / gv);
            const double shell0 =
                model.gauge().energy_in_shell(a.data(), 1.0, 1.0 + 5.0 / gv) / g2;
            double best_other = 0;
            for (double lo = 2.0; lo * std::exp(L) < lab.spec.r_max; lo *= 1.3)
                best_other = std::max(best_other, model.gauge().energy_in_shell(
                                                      a.data(), lo, lo * std::exp(L)) /
                                                      g2);
            pass = pass && shell0 > best_other;
            detail += fmt("g=%g: shell=%.4f best-other=%.4f  ", gv, shell0, best_other);
        }
        report(pass, "shell concentration (O(1/g) shell vs log-width shells beyond 2): " +
                         detail);
    } catch (const std::exception& e) {
        report(false, fmt("shell concentration: %s", e.what()));
    }

    // ---- 13: determinism and round trip ----------------------------------
    try {
        RunConfig cfg;
        cfg.grid.r_max = 32.0;
        cfg.grid.n_r_in = 8;
        cfg.grid.n_r_out = 48;
        cfg.grid.n_theta = 12;
        cfg.has_g = true;
        cfg.g = 6.0;
        cfg.seed_policy = SeedPolicy::Random;
        cfg.rng_seed = 4242;

        auto slurp = [](const std::string& p) {
            std::ifstream is(p, std::ios::binary);
            std::stringstream ss;
            ss << is.rdbuf();
            return ss.str();
        };

        SolutionFile sf1 = run_solve(cfg);
        SolutionFile sf2 = run_solve(cfg);
        save_solution_file(sf1, "/tmp/su2stat_acc_1.json");
        save_solution_file(sf2, "/tmp/su2stat_acc_2.json");
        const bool identical = slurp("/tmp/su2stat_acc_1.json") ==
                               slurp("/tmp/su2stat_acc_2.json");

        SolutionFile loaded = load_solution_file("/tmp/su2stat_acc_1.json");
        save_solution_file(loaded, "/tmp/su2stat_acc_3.json");
        const bool roundtrip = slurp("/tmp/su2stat_acc_1.json") ==
                               slurp("/tmp/su2stat_acc_3.json");

        const bool fresh_ok = verify_solution_file(sf1).all_pass;

        SolutionFile bad = sf1;
        bad.solution.alpha.v[bad.solution.alpha.v.size() / 2] += 0.25;
        const bool corrupt_fails = !verify_solution_file(bad).all_pass;

        const bool pass = identical && roundtrip && fresh_ok && corrupt_fails;
        report(pass, fmt("determinism & round trip: identical reruns %s, lossless "
                         "round-trip %s, fresh verify %s, corrupted verify fails %s",
                         identical ? "yes" : "no", roundtrip ? "yes" : "no",
                         fresh_ok ? "yes" : "no", corrupt_fails ? "yes" : "no"));
    } catch (const std::exception& e) {
        report(false, fmt("determinism: %s", e.what()));
    }

    std::printf("RESULT: %d/13 criteria pass\n", 13 - g_failures);
    return g_failures;
}
