#include "asymptotics.hpp"

#include <cmath>

namespace su2stat {

namespace {

FitWindow resolve_window(const Grid& g, FitWindow w) {
    if (w.r_lo <= 0.0) w.r_lo = g.spec().r_max / 8.0;
    if (w.r_hi <= 0.0) w.r_hi = g.spec().r_max / 4.0;
    if (!(w.r_lo < w.r_hi)) throw ConfigError("fit window: need r_lo < r_hi");
    return w;
}

std::vector<int> window_nodes(const Grid& g, const FitWindow& w) {
    std::vector<int> idx;
    for (int i = g.ball_index(); i < g.nr(); ++i) {
        const double r = g.r_nodes()[i];
        if (r >= w.r_lo && r <= w.r_hi) idx.push_back(i);
    }
    if (idx.size() < 8)
        throw ConfigError("fit window [" + std::to_string(w.r_lo) + ", " +
                          std::to_string(w.r_hi) + "] holds fewer than 8 radial nodes");
    return idx;
}

std::vector<double> sphere_avg(const Grid& g, const Field& psi) {
    std::vector<double> avg(g.nr(), 0.0);
    for (int i = 0; i < g.nr(); ++i) {
        double s = 0.0;
        for (int j = 0; j < g.ntheta(); ++j) s += psi.v[g.at(i, j)] * g.w_sphere()[j];
        avg[i] = 0.5 * s;
    }
    return avg;
}

std::vector<double> sin2_moment(const Grid& g, const Field& alpha) {
    std::vector<double> f(g.nr(), 0.0);
    const double dth = g.dtheta();
    for (int i = 0; i < g.nr(); ++i) {
        double s = 0.0;
        for (int j = 0; j < g.ntheta(); ++j) {
            const double sn = std::sin(g.theta_nodes()[j]);
            s += alpha.v[g.at(i, j)] * sn * sn * dth;
        }
        f[i] = s;
    }
    return f;
}

// Ordinary least squares y ~ a*x1 + b*x2.
void ls2(const std::vector<double>& x1, const std::vector<double>& x2,
         const std::vector<double>& y, double* a, double* b, double* rms) {
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    const std::size_t n = y.size();
    for (std::size_t k = 0; k < n; ++k) {
        s11 += x1[k] * x1[k];
        s12 += x1[k] * x2[k];
        s22 += x2[k] * x2[k];
        r1 += x1[k] * y[k];
        r2 += x2[k] * y[k];
    }
    const double det = s11 * s22 - s12 * s12;
    *a = (s22 * r1 - s12 * r2) / det;
    *b = (s11 * r2 - s12 * r1) / det;
    if (rms) {
        double ss = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double e = y[k] - (*a) * x1[k] - (*b) * x2[k];
            ss += e * e;
        }
        *rms = std::sqrt(ss / n);
    }
}

}  // namespace

double fit_e0(const Solution& sol, const Grid& grid, FitWindow w) {
    w = resolve_window(grid, w);
    const auto idx = window_nodes(grid, w);
    const auto avg = sphere_avg(grid, sol.psi.psi);
    std::vector<double> ones, invr, y;
    for (int i : idx) {
        const double r = grid.r_nodes()[i];
        ones.push_back(1.0);
        invr.push_back(1.0 / r);
        y.push_back(r * avg[i]);
    }
    double a = 0, b = 0;
    ls2(ones, invr, y, &a, &b, nullptr);
    return a * sol.g * sol.g / std::sqrt(2.0);
}

void fit_decay_exponent(const Solution& sol, const Grid& grid, FitWindow w,
                        double* p0_fit, double* c0, double* rms, double* angular_mismatch) {
    w = resolve_window(grid, w);
    const auto idx = window_nodes(grid, w);
    const auto f = sin2_moment(grid, sol.alpha);
    std::vector<double> ones, lnr, y;
    for (int i : idx) {
        if (!(f[i] > 0.0))
            throw SolverError("fit_decay_exponent: f(r) not positive on the window at r=" +
                              std::to_string(grid.r_nodes()[i]));
        ones.push_back(1.0);
        lnr.push_back(std::log(grid.r_nodes()[i]));
        y.push_back(std::log(f[i]));
    }
    double a = 0, slope = 0;
    ls2(ones, lnr, y, &a, &slope, rms);
    *p0_fit = -slope;
    *c0 = 0.75 * std::exp(a);  // f ~ (4/3) c0 r^-p0 for alpha ~ c0 sin r^-p0

    if (angular_mismatch) {
        double worst = 0.0;
        for (int i : idx) {
            double num = 0, den = 0, ss = 0;
            for (int j = 0; j < grid.ntheta(); ++j) {
                const double s = std::sin(grid.theta_nodes()[j]);
                const double av = sol.alpha.v[grid.at(i, j)];
                const double wj = grid.w_sphere()[j];
                num += av * s * wj;
                den += s * s * wj;
                ss += av * av * wj;
            }
            if (ss <= 0.0) continue;
            const double proj = num * num / den;  // |<a, sin>|^2 / |sin|^2
            const double mis = std::sqrt(std::max(0.0, 1.0 - proj / ss));
            worst = std::max(worst, mis);
        }
        *angular_mismatch = worst;
    }
}

void fit_remainders(const Solution& sol, const Grid& grid, const AsymptoticsReport& rep,
                    FitWindow w, double* m_psi, double* m_alpha) {
    w = resolve_window(grid, w);
    const auto idx = window_nodes(grid, w);
    const auto avg = sphere_avg(grid, sol.psi.psi);
    const auto f = sin2_moment(grid, sol.alpha);
    const double g2 = sol.g * sol.g;
    double mp = 0, ma = 0;
    for (int i : idx) {
        const double r = grid.r_nodes()[i];
        mp = std::max(mp, r * std::abs(r * avg[i] * g2 / std::sqrt(2.0) - rep.e0));
        ma = std::max(ma, r * std::abs(0.75 * f[i] * std::pow(r, rep.p0_fit) - rep.c0));
    }
    *m_psi = mp;
    *m_alpha = ma;
}

AsymptoticsReport analyze_asymptotics(const Solution& sol, const Grid& grid, FitWindow w) {
    w = resolve_window(grid, w);
    AsymptoticsReport rep;
    rep.fit_lo = w.r_lo;
    rep.fit_hi = w.r_hi;
    rep.e0 = fit_e0(sol, grid, w);
    rep.psi0 = rep.e0 * std::sqrt(2.0) / (sol.g * sol.g);

    // psi-fit residual in the same variables as fit_e0
    {
        const auto idx = window_nodes(grid, w);
        const auto avg = sphere_avg(grid, sol.psi.psi);
        std::vector<double> ones, invr, y;
        for (int i : idx) {
            const double r = grid.r_nodes()[i];
            ones.push_back(1.0);
            invr.push_back(1.0 / r);
            y.push_back(r * avg[i]);
        }
        double a, b;
        ls2(ones, invr, y, &a, &b, &rep.rms_psi);
    }

    const double arg = 9.0 - 8.0 * rep.e0 * rep.e0;
    rep.p0_formula = 0.5 * (std::sqrt(std::max(arg, 0.0)) - 1.0);

    try {
        fit_decay_exponent(sol, grid, w, &rep.p0_fit, &rep.c0, &rep.rms_alpha,
                           &rep.angular_mismatch);
    } catch (const SolverError&) {
        rep.p0_fit = std::numeric_limits<double>::quiet_NaN();
        rep.c0 = 0.0;
    }
    if (std::isfinite(rep.p0_fit))
        fit_remainders(sol, grid, rep, w, &rep.m_psi_bound, &rep.m_alpha_bound);
    rep.valid = std::isfinite(rep.p0_fit);
    return rep;
}

PointwiseBounds check_pointwise_bounds(const Solution& sol, const Grid& grid, double gamma) {
    PointwiseBounds out;
    if (gamma <= 0.0) gamma = grid.spec().r_max / 8.0;
    out.gamma = gamma;
    const auto avg = sphere_avg(grid, sol.psi.psi);
    const double g = sol.g;
    double sup2 = 0, supg = 0;
    for (int i = grid.ball_index(); i < grid.nr(); ++i) {
        const double r = grid.r_nodes()[i];
        if (r >= 2.0) sup2 = std::max(sup2, r * avg[i] * std::sqrt(g));
        if (r >= gamma)
            supg = std::max(supg, r * avg[i] * g * g * std::exp(std::pow(g, 0.25) / gamma));
    }
    out.sup_rpsi_sqrtg = sup2;
    out.sup_rpsi_exp = supg;

    double inf = std::numeric_limits<double>::infinity();
    // evaluate at the equator band, clear of the Dirichlet boundary layer
    for (int i = grid.ball_index(); i < grid.nr(); ++i) {
        const double r = grid.r_nodes()[i];
        if (r < gamma || r > grid.spec().r_max / 4.0) continue;
        for (int j = 0; j < grid.ntheta(); ++j) {
            const double s = std::sin(grid.theta_nodes()[j]);
            if (s < 0.5) continue;
            const double v = r * sol.alpha.v[grid.at(i, j)] / (std::sqrt(g) * s);
            inf = std::min(inf, v);
        }
    }
    out.inf_ralpha_over_sqrtg = std::isfinite(inf) ? inf : 0.0;
    return out;
}

}  // namespace su2stat
