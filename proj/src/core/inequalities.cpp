#include "inequalities.hpp"

#include <cmath>
#include <random>

namespace su2stat {

namespace {

// Quadrature helpers on the radial line r >= 1 (node-interval based).
struct RadialQuad {
    const Grid* g;
    int i0;

    double lhs_invr2(const std::vector<double>& f) const {  // int r^-2 f^2 dr
        double s = 0.0;
        for (int i = i0; i < g->nr(); ++i) {
            const double q = g->invr2_r()[i];
            s += q * f[i] * f[i];
        }
        return s;
    }
    double lhs_plain(const std::vector<double>& f) const {  // int f^2 dr, r >= 1
        double s = 0.0;
        for (int i = i0; i < g->nr(); ++i) {
            const double a = std::max(g->r_faces()[i], 1.0), b = g->r_faces()[i + 1];
            if (b > a) s += (b - a) * f[i] * f[i];
        }
        return s;
    }
    double rhs_fr2(const std::vector<double>& f) const {  // int f_r^2 dr
        double s = 0.0;
        for (int i = i0; i + 1 < g->nr(); ++i) {
            const double h = g->r_nodes()[i + 1] - g->r_nodes()[i];
            const double d = (f[i + 1] - f[i]) / h;
            s += d * d * h;
        }
        return s;
    }
    double rhs_fr2_r2(const std::vector<double>& f) const {  // int f_r^2 r^2 dr
        double s = 0.0;
        for (int i = i0; i + 1 < g->nr(); ++i) {
            const double h = g->r_nodes()[i + 1] - g->r_nodes()[i];
            const double d = (f[i + 1] - f[i]) / h;
            s += d * d * g->r_nodes()[i] * g->r_nodes()[i + 1] * h;  // exact for 1/r
        }
        return s;
    }
};

}  // namespace

InequalityReport validate_inequalities(const Grid& g, int samples, std::uint64_t seed) {
    if (samples < 1) throw ConfigError("validate_inequalities: samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> Upos(0.4, 1.6);

    InequalityReport rep;
    rep.samples = samples;
    const double h = g.h_nominal();
    rep.slack = 5.0 * h * h;

    RadialQuad quad{&g, g.ball_index()};
    const int nr = g.nr(), nt = g.ntheta();

    for (int s = 0; s < samples; ++s) {
        // Inequality 1: f(r) vanishing at r = 1, decaying, f_r in L^2(dr).
        std::vector<double> f1(nr, 0.0);
        {
            const double c1 = U(rng), c2 = U(rng), b1 = Upos(rng), b2 = Upos(rng);
            const int pw = 1 + (s % 3);
            for (int i = quad.i0; i < nr; ++i) {
                const double r = g.r_nodes()[i], x = r - 1.0;
                f1[i] = c1 * std::pow(x, pw) * std::exp(-b1 * r) +
                        c2 * (1.0 - std::exp(-x)) * std::exp(-b2 * r);
            }
            const double lhs = quad.lhs_invr2(f1), rhs = 4.0 * quad.rhs_fr2(f1);
            if (rhs > 0.0) rep.worst_ratio[0] = std::max(rep.worst_ratio[0], lhs / rhs);
        }
        // Inequality 2: f -> 0 at infinity, r f_r in L^2.
        {
            std::vector<double> f2(nr, 0.0);
            const double c1 = U(rng), c2 = U(rng), b1 = Upos(rng), p = 1.0 + Upos(rng);
            for (int i = quad.i0; i < nr; ++i) {
                const double r = g.r_nodes()[i];
                f2[i] = c1 * std::pow(r, -p) + c2 * std::exp(-b1 * r);
            }
            const double lhs = quad.lhs_plain(f2), rhs = 4.0 * quad.rhs_fr2_r2(f2);
            if (rhs > 0.0) rep.worst_ratio[1] = std::max(rep.worst_ratio[1], lhs / rhs);
        }
        // Inequality 3: angular Sturm-Liouville bound, eigenfunction sin(theta).
        {
            std::vector<double> f3(nt, 0.0);
            const double c0 = U(rng), c1 = U(rng), c2 = U(rng);
            for (int j = 0; j < nt; ++j) {
                const double t = g.theta_nodes()[j];
                f3[j] = c0 * std::sin(t) + c1 * std::sin(t) * std::cos(t) +
                        c2 * std::sin(2.0 * t) * std::cos(t);
            }
            double lhs = 0.0;
            for (int j = 0; j < nt; ++j) lhs += g.w_sphere()[j] * f3[j] * f3[j];
            // RHS with the same flux form as the gauge operator (u = sin f).
            double rhs = 0.0;
            auto u = [&](int j) { return std::sin(g.theta_nodes()[j]) * f3[j]; };
            rhs += u(0) * u(0) / (1.0 - std::cos(g.theta_nodes()[0]));
            rhs += u(nt - 1) * u(nt - 1) / (std::cos(g.theta_nodes()[nt - 1]) + 1.0);
            for (int j = 0; j + 1 < nt; ++j) {
                const double du = u(j + 1) - u(j);
                rhs += du * du / (std::cos(g.theta_nodes()[j]) - std::cos(g.theta_nodes()[j + 1]));
            }
            rhs *= 0.5;
            if (rhs > 0.0) rep.worst_ratio[2] = std::max(rep.worst_ratio[2], lhs / rhs);
        }
    }

    for (double r : rep.worst_ratio)
        if (r > 1.0 + rep.slack) rep.pass = false;
    return rep;
}

}  // namespace su2stat
