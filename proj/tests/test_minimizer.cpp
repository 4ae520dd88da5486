#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/minimize.hpp"

#include <cmath>
#include <random>

using namespace su2stat;

namespace {

GridSpec small_spec() {
    GridSpec s;
    s.r_max = 32.0;
    s.n_r_in = 16;
    s.n_r_out = 96;
    s.n_theta = 24;
    return s;
}

// Smooth positive test amplitude, O(1), vanishing at r=1 and decaying.
Field smooth_alpha(const Grid& g, double amp) {
    Field a(g, Support::OutsideBall);
    for (int i = g.ball_index(); i < g.nr(); ++i) {
        const double r = g.r_nodes()[i];
        const double rad = amp * (1.0 - std::exp(-(r - 1.0))) * std::exp(-r / 6.0);
        for (int j = 0; j < g.ntheta(); ++j)
            a.v[g.at(i, j)] = rad * (std::sin(g.theta_nodes()[j]) +
                                     0.3 * std::pow(std::sin(g.theta_nodes()[j]), 3));
    }
    return a;
}

// Smooth random perturbation direction: rough (white-noise) directions carry
// most of their norm where the gradient has no mass, which starves the
// finite-difference signal against the fixed 1e-5/1e-6 steps.
std::vector<double> random_direction(const EnergyModel& model, std::uint64_t seed) {
    const Grid& g = model.grid();
    const int nt = g.ntheta(), nro = model.gauge().nro(), i0 = g.ball_index();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int K = 3, M = 3;
    std::vector<double> c(static_cast<std::size_t>(K) * M);
    for (auto& v : c) v = U(rng);
    std::vector<double> d(static_cast<std::size_t>(nro) * nt, 0.0);
    double norm = 0.0;
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
            norm += v * v;
        }
    }
    norm = std::sqrt(norm);
    for (auto& v : d) v /= norm;
    return d;
}

double energy_at(const EnergyModel& model, const std::vector<double>& a0,
                 const std::vector<double>& dir, double t) {
    std::vector<double> av = a0;
    for (std::size_t k = 0; k < av.size(); ++k) av[k] += t * dir[k];
    Field alpha = model.unpack_outer(av);
    return model.reduced_energy(alpha).total;
}

}  // namespace

TEST_CASE("reduced energy: Coulomb baseline and exact g^2 scaling") {
    Grid g(small_spec());
    Field zero(g, Support::OutsideBall);
    EnergyModel m1(g, Coupling(1.0), 1e-12);
    EnergyBreakdown e1 = m1.reduced_energy(zero);
    CHECK(e1.magnetic == 0.0);
    CHECK(e1.interaction == 0.0);
    CHECK(e1.total == doctest::Approx(3.0 / (40.0 * M_PI)).epsilon(5e-3));
    CHECK(std::abs(e1.total - e1.total_direct) <= 1e-12 * e1.total);
    // electric parts as field quadrature vs the charge route
    CHECK(std::abs(e1.electric_inside + e1.electric_outside + e1.interaction -
                   e1.electric_via_charge) <= 1e-6 * e1.electric_via_charge);

    EnergyModel m2(g, Coupling(2.0), 1e-12);
    EnergyBreakdown e2 = m2.reduced_energy(zero);
    CHECK(e2.total / e1.total == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("reduced energy is even in alpha") {
    Grid g(small_spec());
    EnergyModel model(g, Coupling(10.0), 1e-12);
    Field a = smooth_alpha(g, 2.0);
    Field neg = a;
    for (auto& v : neg.v) v = -v;
    const double e1 = model.reduced_energy(a).total;
    const double e2 = model.reduced_energy(neg).total;
    CHECK(std::abs(e1 - e2) <= 1e-12 * std::abs(e1));
}

TEST_CASE("analytic gradient matches central finite differences (Richardson)") {
    Grid g(small_spec());
    for (double gv : {5.0, 10.0, 20.0}) {
        EnergyModel model(g, Coupling(gv), 1e-10);  // direct path: machine-accurate, smooth in alpha
        Field a = smooth_alpha(g, 1.0);
        const std::vector<double> a0 = model.pack_outer(a);
        ElectricPotential psi = model.solve_psi(a);
        const std::vector<double> gvec = model.gradient_vector(a, psi);

        const double E0 = model.reduced_energy(a).total;
        for (std::uint64_t sd = 1; sd <= 5; ++sd) {
            std::vector<double> dir = random_direction(model, 1000 * sd + 7);
            double analytic = 0.0;
            for (std::size_t k = 0; k < dir.size(); ++k) analytic += gvec[k] * dir[k];
            // scale the direction so the finite-difference signal sits well
            // above the evaluation floor
            const double scale = 0.25 * (1.0 + std::abs(E0)) / std::abs(analytic);
            for (auto& v : dir) v *= scale;
            analytic *= scale;

            auto central = [&](double t) {
                return (energy_at(model, a0, dir, t) - energy_at(model, a0, dir, -t)) /
                       (2.0 * t);
            };
            const double d1 = central(1e-5), d2 = central(1e-6);
            const double richardson = (100.0 * d2 - d1) / 99.0;
            const double rel = std::abs(richardson - analytic) / std::abs(analytic);
            CHECK(rel < 1e-6);
        }
    }
}

TEST_CASE("gradient vanishes identically at the Coulomb point") {
    Grid g(small_spec());
    EnergyModel model(g, Coupling(10.0), 1e-12);
    Field zero(g, Support::OutsideBall);
    ElectricPotential psi = model.solve_psi(zero);
    const std::vector<double> gvec = model.gradient_vector(zero, psi);
    for (double v : gvec) CHECK(v == 0.0);
}

TEST_CASE("seed builders") {
    Grid g(small_spec());

    SUBCASE("hessian seed: sup amplitude, admissible support") {
        Field h = hessian_seed(g);
        CHECK(max_abs_inside_ball(g, h) == 0.0);
        double sup = 0;
        for (double v : h.v) sup = std::max(sup, std::abs(v));
        CHECK(sup == doctest::Approx(1e-2).epsilon(1e-12));
    }

    SUBCASE("trial field: zero lambda, parameter validation, profile bounds") {
        CHECK_THROWS_AS(trial_alpha(Coupling(10.0), 0.5, 0.1, g), ConfigError);
        CHECK_THROWS_AS(trial_alpha(Coupling(10.0), 2.0, 0.7, g), ConfigError);
        Field z = trial_alpha(Coupling(10.0), 0.0, 0.1, g);
        for (double v : z.v) CHECK(v == 0.0);

        Field t = trial_alpha_default(Coupling(10.0), g);
        CHECK(max_abs_inside_ball(g, t) == 0.0);
        double sup = 0;
        for (double v : t.v) sup = std::max(sup, v);  // non-negative by construction
        CHECK(sup <= 10.0 * (1.0 + 1e-12));
        CHECK(sup > 5.0);
    }

    SUBCASE("random seeds differ by seed and are deterministic") {
        Field r1 = random_seed(g, 42), r2 = random_seed(g, 42), r3 = random_seed(g, 43);
        CHECK(r1.v == r2.v);
        CHECK(r1.v != r3.v);
    }
}

TEST_CASE("trial-field energy is an upper bound for the minimizer") {
    Grid g(small_spec());
    const double gv = 10.0;
    EnergyModel model(g, Coupling(gv), 1e-12);
    Field trial = trial_alpha_default(Coupling(gv), g);
    const double e_trial = model.reduced_energy(trial).total;
    // measured constant of the linear-correction upper bound
    const double C = (kEnergyNormDoubled * e_trial - gv * gv / (40.0 * M_PI)) / gv;
    CHECK(C > 0.0);
    MESSAGE("trial-field constant C = ", C);

    MinimizeOptions opts;
    Solution sol = minimize(model, hessian_seed(g), opts);
    CHECK(sol.report.converged);
    CHECK(sol.energy.total <= e_trial * (1.0 + 1e-12));
}

TEST_CASE("subcritical couplings collapse to the Coulomb solution") {
    Grid g(small_spec());
    for (double gv : {2.0, 3.0}) {
        EnergyModel model(g, Coupling(gv), 1e-12);
        MinimizeOptions opts;
        Solution sol = minimize(model, hessian_seed(g), opts);
        CHECK(sol.report.converged);
        double sup = 0;
        for (double v : sol.alpha.v) sup = std::max(sup, std::abs(v));
        CHECK(sup < 1e-6);
        CHECK(sol.energy.total ==
              doctest::Approx(3.0 * gv * gv / (40.0 * M_PI)).epsilon(5e-3));
    }
}

TEST_CASE("supercritical minimizer: descent, gain, identities, sign structure") {
    Grid g(small_spec());
    const double gv = 10.0;
    EnergyModel model(g, Coupling(gv), 1e-12);
    MinimizeOptions opts;
    Solution sol = minimize(model, hessian_seed(g), opts);
    CHECK(sol.report.converged);
    CHECK(sol.report.final_gradient_norm < opts.grad_tol);

    // energy history is non-increasing, exactly
    const auto& h = sol.report.energy_history;
    for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1]);

    // strict gain over Coulomb
    CHECK(sol.energy.total < 3.0 * gv * gv / (40.0 * M_PI));
    CHECK(sol.energy.interaction > 1e-4);

    // virial balance: magnetic part equals interaction part at critical points
    const double scale = std::max(sol.energy.magnetic, sol.energy.interaction);
    CHECK(std::abs(sol.energy.magnetic - sol.energy.interaction) <= 1e-3 * scale);

    // alpha >= 0 everywhere; strictly positive off the boundary layers, above
    // a floor proportional to r^-2 (r-1) sin(theta)
    double c_fit = 1e300;
    for (int i = g.ball_index() + 1; i < g.nr(); ++i) {
        const double r = g.r_nodes()[i];
        for (int j = 0; j < g.ntheta(); ++j) {
            const double v = sol.alpha.v[g.at(i, j)];
            CHECK(v >= 0.0);
            if (r <= g.spec().r_max / 2.0) {
                const double floor_shape =
                    (r - 1.0) * std::sin(g.theta_nodes()[j]) / (r * r);
                c_fit = std::min(c_fit, v / floor_shape);
            }
        }
    }
    CHECK(c_fit > 0.0);
    MESSAGE("lower-bound constant fit: ", c_fit);
}

TEST_CASE("uniqueness probe: independent seeds agree") {
    Grid g(small_spec());
    const double gv = 10.0;
    EnergyModel model(g, Coupling(gv), 1e-12);
    MinimizeOptions opts;

    Solution s1 = minimize(model, random_seed(g, 11), opts);
    Solution s2 = minimize(model, random_seed(g, 2026), opts);
    CHECK(s1.report.converged);
    CHECK(s2.report.converged);
    CHECK(std::abs(s1.energy.total - s2.energy.total) <= 1e-6 * std::abs(s1.energy.total));
    double sup = 0;
    for (std::size_t k = 0; k < s1.alpha.v.size(); ++k)
        sup = std::max(sup, std::abs(s1.alpha.v[k] - s2.alpha.v[k]));
    CHECK(sup < 1e-4);
}

TEST_CASE("continuation sweep: collapse below threshold, gain above") {
    Grid g(small_spec());
    MinimizeOptions opts;
    auto sols = continuation_sweep(g, {3.0, 4.0}, 1e-12, opts);
    REQUIRE(sols.size() == 2);
    for (const auto& s : sols) {
        CHECK(s.report.converged);
        double sup = 0;
        for (double v : s.alpha.v) sup = std::max(sup, std::abs(v));
        CHECK(sup < 1e-6);
    }

    auto sols2 = continuation_sweep(g, {6.0, 10.0}, 1e-12, opts);
    REQUIRE(sols2.size() == 2);
    for (const auto& s : sols2) {
        CHECK(s.report.converged);
        CHECK(s.energy.total < 3.0 * s.g * s.g / (40.0 * M_PI));
    }
    CHECK_THROWS_AS(continuation_sweep(g, {10.0, 6.0}, 1e-12, opts), ConfigError);
}

TEST_CASE("warm vs cold start reach the same minimizer") {
    Grid g(small_spec());
    const double gv = 10.0;
    EnergyModel model(g, Coupling(gv), 1e-12);
    MinimizeOptions opts;
    Solution cold = minimize(model, hessian_seed(g), opts);
    Solution warm = minimize(model, trial_alpha_default(Coupling(gv), g), opts);
    CHECK(std::abs(cold.energy.total - warm.energy.total) <=
          1e-6 * std::abs(cold.energy.total));
    double sup = 0;
    for (std::size_t k = 0; k < cold.alpha.v.size(); ++k)
        sup = std::max(sup, std::abs(cold.alpha.v[k] - warm.alpha.v[k]));
    CHECK(sup < 1e-4);
}

TEST_CASE("iteration cap returns best-so-far with diagnostics") {
    Grid g(small_spec());
    EnergyModel model(g, Coupling(10.0), 1e-12);
    MinimizeOptions opts;
    opts.max_iters = 5;
    Solution sol = minimize(model, hessian_seed(g), opts);
    CHECK_FALSE(sol.report.converged);
    CHECK(!sol.report.message.empty());
    CHECK(sol.report.energy_history.size() >= 2);
}
