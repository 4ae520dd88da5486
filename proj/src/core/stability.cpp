#include "stability.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace su2stat {

namespace {

// Pencil data on the outer lattice: A = g^-2 M_g - g^2 C, B = N.
// DOFs: outer nodes with I >= 1 (Dirichlet at r = 1, free at r_max).
struct Pencil {
    const Grid* grid;
    const GaugeStencil* gauge;
    double g;
    std::vector<double> C;  // diag weights: w_vol_out * r^-2 psi_C^2
    std::vector<double> N;  // diag weights: w_vol_out * r^-4
    int nro, nt;

    Pencil(const Grid& gr, const GaugeStencil& gs, double gg) : grid(&gr), gauge(&gs), g(gg) {
        nro = gs.nro();
        nt = gr.ntheta();
        const int i0 = gr.ball_index();
        C.assign(static_cast<std::size_t>(nro) * nt, 0.0);
        N.assign(C.size(), 0.0);
        for (int I = 0; I < nro; ++I) {
            const double r = gr.r_nodes()[i0 + I];
            const double pc = coulomb_psi_value(r);
            for (int j = 0; j < nt; ++j) {
                const std::size_t k = static_cast<std::size_t>(I) * nt + j;
                const std::size_t kg = gr.at(i0 + I, j);
                const double w_out = gr.w_vol()[kg] - gr.w_vol_in()[kg];
                C[k] = w_out * pc * pc / (r * r);
                N[k] = w_out / (r * r * r * r);
            }
        }
    }

    void zero_bc(std::vector<double>& x) const {
        for (int j = 0; j < nt; ++j) x[j] = 0.0;
    }

    void apply_A(const std::vector<double>& x, std::vector<double>& y) const {
        gauge->apply(x.data(), y.data());
        const double inv_g2 = 1.0 / (g * g), g2 = g * g;
        for (std::size_t k = 0; k < x.size(); ++k) y[k] = inv_g2 * y[k] - g2 * C[k] * x[k];
        zero_bc(y);
    }

    double form_m(const std::vector<double>& x) const { return gauge->energy(x.data()); }
    double form_c(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += C[k] * x[k] * x[k];
        return s;
    }
    double form_n(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += N[k] * x[k] * x[k];
        return s;
    }
};

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// Rayleigh-quotient minimization of (A, B=N) over span{x, precond residual, p}
// with a 3x3 dense subproblem each sweep (single-vector LOBPCG).
struct RqResult {
    double lambda;
    std::vector<double> x;
    int iterations;
    bool converged;
};

RqResult rq_minimize(const Pencil& P, std::vector<double> x0, double tol, int max_iter) {
    const std::size_t n = x0.size();
    std::vector<double> x = std::move(x0);
    P.zero_bc(x);

    // Preconditioner: Jacobi of A shifted safely positive.
    const double shift = P.g * P.g / (16.0 * M_PI * M_PI);  // lambda_min >= -g^2/(4pi)^2
    std::vector<double> T(n);
    for (std::size_t k = 0; k < n; ++k) {
        double d = P.gauge->diag()[k] / (P.g * P.g) - P.g * P.g * P.C[k] + 1.05 * shift * P.N[k];
        T[k] = 1.0 / std::max(d, 1e-300);
    }

    auto bnorm = [&](std::vector<double>& v) {
        const double s = std::sqrt(P.form_n(v));
        if (s > 0.0)
            for (auto& e : v) e /= s;
        return s;
    };
    if (bnorm(x) == 0.0) throw SolverError("min_eigenvalue: zero initial vector");

    std::vector<double> Ax(n), r(n), w(n), p(n, 0.0), Aw(n), Ap(n);
    P.apply_A(x, Ax);
    double lam = dotv(x, Ax);
    bool have_p = false;
    int it = 0;
    bool conv = false;

    for (; it < max_iter; ++it) {
        for (std::size_t k = 0; k < n; ++k) r[k] = Ax[k] - lam * P.N[k] * x[k];
        P.zero_bc(r);
        const double rn = std::sqrt(dotv(r, r));
        const double scale = std::sqrt(dotv(Ax, Ax)) + std::abs(lam);
        if (rn <= tol * std::max(scale, 1e-30)) {
            conv = true;
            break;
        }
        for (std::size_t k = 0; k < n; ++k) w[k] = T[k] * r[k];
        P.zero_bc(w);
        const double wn = std::sqrt(P.form_n(w));
        if (wn == 0.0) {
            conv = true;
            break;
        }
        for (auto& e2 : w) e2 /= wn;

        // Assemble the (up to) 3-dim subspace {x, w, p}.
        std::vector<std::vector<double>*> basis = {&x, &w};
        if (have_p) basis.push_back(&p);
        const int m = static_cast<int>(basis.size());
        Eigen::MatrixXd GA(m, m), GB(m, m);
        std::vector<std::vector<double>> Av(m, std::vector<double>(n));
        for (int a = 0; a < m; ++a) P.apply_A(*basis[a], Av[a]);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b <= a; ++b) {
                GA(a, b) = GA(b, a) = dotv(*basis[a], Av[b]);
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    s += P.N[k] * (*basis[a])[k] * (*basis[b])[k];
                GB(a, b) = GB(b, a) = s;
            }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(GA, GB);
        if (es.info() != Eigen::Success) break;
        Eigen::VectorXd c = es.eigenvectors().col(0);
        lam = es.eigenvalues()(0);

        std::vector<double> x_new(n, 0.0), p_new(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double xv = 0.0, pv = 0.0;
            for (int a = 0; a < m; ++a) xv += c(a) * (*basis[a])[k];
            pv = c(1) * w[k];
            if (have_p) pv += c(2) * p[k];
            x_new[k] = xv;
            p_new[k] = pv;
        }
        x = std::move(x_new);
        p = std::move(p_new);
        bnorm(x);
        const double pn = std::sqrt(P.form_n(p));
        if (pn > 0.0)
            for (auto& e : p) e /= pn;
        have_p = true;
        P.apply_A(x, Ax);
        lam = dotv(x, Ax) / P.form_n(x);
    }

    return {lam, std::move(x), it, conv};
}

std::vector<double> default_eig_seed(const Pencil& P) {
    // The analytic unstable direction (r^{1/2} - 1) sin(theta).
    const Grid& g = *P.grid;
    const int i0 = g.ball_index();
    std::vector<double> x(static_cast<std::size_t>(P.nro) * P.nt, 0.0);
    for (int I = 1; I < P.nro; ++I) {
        const double r = g.r_nodes()[i0 + I];
        const double rad = std::sqrt(r) - 1.0;
        for (int j = 0; j < P.nt; ++j)
            x[static_cast<std::size_t>(I) * P.nt + j] = rad * std::sin(g.theta_nodes()[j]);
    }
    return x;
}

}  // namespace

double hessian_form(const Field& beta, const Coupling& g, const Grid& grid) {
    if (beta.support != Support::OutsideBall)
        throw std::invalid_argument("hessian_form: beta must be OutsideBall");
    GaugeStencil gs(grid);
    Pencil P(grid, gs, g.g);
    const int i0 = grid.ball_index(), nt = grid.ntheta();
    std::vector<double> b(static_cast<std::size_t>(P.nro) * nt);
    for (int I = 0; I < P.nro; ++I)
        for (int j = 0; j < nt; ++j)
            b[static_cast<std::size_t>(I) * nt + j] = beta.v[grid.at(i0 + I, j)];
    return P.form_m(b) / (g.g * g.g) - g.g * g.g * P.form_c(b);
}

EigenResult min_eigenvalue(const Coupling& g, const Grid& grid) {
    GaugeStencil gs(grid);
    Pencil P(grid, gs, g.g);
    RqResult rq = rq_minimize(P, default_eig_seed(P), 1e-10, 3000);
    if (!rq.converged && rq.iterations >= 3000)
        throw SolverError("min_eigenvalue: Rayleigh iteration stagnated");
    EigenResult out;
    out.lambda_min = rq.lambda;
    out.iterations = rq.iterations;
    out.converged = rq.converged;
    out.witness = Field(grid, Support::OutsideBall);
    const int i0 = grid.ball_index(), nt = grid.ntheta();
    for (int I = 1; I < P.nro; ++I)
        for (int j = 0; j < nt; ++j)
            out.witness.v[grid.at(i0 + I, j)] = rq.x[static_cast<std::size_t>(I) * nt + j];
    return out;
}

double dense_min_eigenvalue(const Coupling& g, const Grid& grid) {
    GaugeStencil gs(grid);
    Pencil P(grid, gs, g.g);
    const int nt = grid.ntheta();
    // DOFs: I in [1, nro-1] (free outer end), all j.
    const int ndof = (P.nro - 1) * nt;
    auto dof = [&](int I, int j) { return (I - 1) * nt + j; };

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ndof, ndof);
    std::vector<double> e(static_cast<std::size_t>(P.nro) * nt, 0.0), Ae(e.size());
    for (int I = 1; I < P.nro; ++I)
        for (int j = 0; j < nt; ++j) {
            e[static_cast<std::size_t>(I) * nt + j] = 1.0;
            P.apply_A(e, Ae);
            e[static_cast<std::size_t>(I) * nt + j] = 0.0;
            for (int I2 = 1; I2 < P.nro; ++I2)
                for (int j2 = 0; j2 < nt; ++j2) {
                    const double v = Ae[static_cast<std::size_t>(I2) * nt + j2];
                    if (v != 0.0) A(dof(I2, j2), dof(I, j)) = v;
                }
        }
    Eigen::VectorXd Bhalf(ndof);
    for (int I = 1; I < P.nro; ++I)
        for (int j = 0; j < nt; ++j)
            Bhalf(dof(I, j)) = std::sqrt(P.N[static_cast<std::size_t>(I) * nt + j]);
    Eigen::MatrixXd S(ndof, ndof);
    for (int a = 0; a < ndof; ++a)
        for (int b = 0; b < ndof; ++b) S(a, b) = A(a, b) / (Bhalf(a) * Bhalf(b));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw SolverError("dense_min_eigenvalue: eigensolver failed");
    return es.eigenvalues()(0);
}

StabilityReport threshold_scan(double g_lo, double g_hi, int steps, const Grid& grid) {
    if (!(g_lo < g_hi)) throw ConfigError("threshold_scan: need g_lo < g_hi");
    if (steps < 2) throw ConfigError("threshold_scan: need at least 2 steps");

    GaugeStencil gs(grid);
    StabilityReport rep;
    std::vector<double> seed;

    auto lam_at = [&](double gv, std::vector<double>* witness) {
        Pencil P(grid, gs, gv);
        RqResult rq = rq_minimize(P, seed.empty() ? default_eig_seed(P) : seed, 1e-10, 3000);
        seed = rq.x;  // warm start the next coupling
        if (witness) *witness = rq.x;
        return rq.lambda;
    };

    for (int k = 0; k < steps; ++k) {
        const double gv = g_lo + (g_hi - g_lo) * k / (steps - 1);
        rep.g_values.push_back(gv);
        rep.lambda_min.push_back(lam_at(gv, nullptr));
    }

    int cross = -1;
    for (int k = 0; k + 1 < steps; ++k)
        if (rep.lambda_min[k] > 0.0 && rep.lambda_min[k + 1] <= 0.0) {
            cross = k;
            break;
        }
    if (cross < 0) {
        rep.crossing_found = false;
        return rep;
    }

    double a = rep.g_values[cross], b = rep.g_values[cross + 1];
    std::vector<double> witness;
    for (int k = 0; k < 40 && (b - a) > 1e-6 * b; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = lam_at(m, &witness);
        if (fm > 0.0)
            a = m;
        else
            b = m;
    }
    rep.crossing_found = true;
    rep.g0_estimate = 0.5 * (a + b);

    // Same threshold via the g-independent quartic: g0^4 = min_beta m/c.
    {
        Pencil P(grid, gs, rep.g0_estimate);
        const double m = P.form_m(witness.empty() ? default_eig_seed(P) : witness);
        const double c = P.form_c(witness.empty() ? default_eig_seed(P) : witness);
        rep.g0_quartic = std::pow(m / c, 0.25);
    }

    rep.hessian_witness = Field(grid, Support::OutsideBall);
    if (!witness.empty()) {
        const int i0 = grid.ball_index(), nt = grid.ntheta();
        const int nro = gs.nro();
        for (int I = 1; I < nro; ++I)
            for (int j = 0; j < nt; ++j)
                rep.hessian_witness.v[grid.at(i0 + I, j)] =
                    witness[static_cast<std::size_t>(I) * nt + j];
    }
    return rep;
}

double kappa_f_value(double kappa, double g, double c1) {
    const double d = 64.0 * M_PI * c1 / g;
    const double s = std::sqrt(1.0 + 4.0 * kappa * kappa * g * g);
    const double p = 0.5 * (s + 1.0), pp = 0.5 * (s - 1.0);
    // X = [(1+d)^Q - 1] / [p (1+d)^Q + p'] computed via t = (1+d)^{-Q}.
    const double t = std::exp(-(p + pp) * std::log1p(d));
    const double X = (1.0 - t) / (p + pp * t);
    return 1.0 / (40.0 * M_PI) + X / (8.0 * M_PI);
}

KappaClosedForm u_kappa_closed_form(double kappa, const Coupling& g, double c1,
                                    const Grid& grid) {
    if (!(kappa >= 0.0)) throw ConfigError("u_kappa_closed_form: kappa must be >= 0");
    if (!(c1 > 0.0)) throw ConfigError("u_kappa_closed_form: c1 must be > 0");
    KappaClosedForm out;
    const double gg = g.g;
    out.d = 64.0 * M_PI * c1 / gg;
    const double s = std::sqrt(1.0 + 4.0 * kappa * kappa * gg * gg);
    out.p = 0.5 * (s + 1.0);
    out.p_prime = 0.5 * (s - 1.0);
    const double L = std::log1p(out.d);  // ln(1+d)
    const double t = std::exp(-(out.p + out.p_prime) * L);
    const double denom = out.p + out.p_prime * t;
    const double X = (1.0 - t) / denom;
    out.f_value = 1.0 / (40.0 * M_PI) + X / (8.0 * M_PI);

    auto u_of_r = [&](double r) {
        if (r >= 1.0 + out.d) return 0.0;
        if (r <= 1.0) return (1.0 - r * r) / (8.0 * M_PI) + X / (4.0 * M_PI);
        // [(1+d)^Q r^-p - r^p'] / [p (1+d)^Q + p'] in overflow-safe form
        const double lr = std::log(r);
        const double term1 = std::exp(-out.p * lr);
        const double term2 = std::exp(out.p_prime * lr - (out.p + out.p_prime) * L);
        return (term1 - term2) / (4.0 * M_PI * denom);
    };
    auto du_of_r = [&](double r) {
        if (r >= 1.0 + out.d) return 0.0;
        if (r <= 1.0) return -r / (4.0 * M_PI);
        const double lr = std::log(r);
        const double term1 = -out.p * std::exp(-(out.p + 1.0) * lr);
        const double term2 = -out.p_prime * std::exp((out.p_prime - 1.0) * lr -
                                                     (out.p + out.p_prime) * L);
        return (term1 + term2) / (4.0 * M_PI * denom);
    };

    out.u = Field(grid, Support::WholeDomain);
    for (int i = 0; i < grid.nr(); ++i) {
        const double v = u_of_r(grid.r_nodes()[i]);
        for (int j = 0; j < grid.ntheta(); ++j) out.u.v[grid.at(i, j)] = v;
    }

    // Independent quadrature of the objective
    //   3 (4pi)^-1 int_{r<=1} u - 2^-1 ( int |grad u|^2 + k^2 g^2 int_{r>=1} r^-2 u^2 )
    // by adaptive Simpson on the radial closed forms.
    std::function<double(std::function<double(double)>, double, double, double, double, int)>
        adsimp = [&](std::function<double(double)> fn, double a, double b, double fa_fb_eps,
                     double whole, int depth) -> double {
        const double m = 0.5 * (a + b);
        auto simp = [&](double x0, double x2) {
            const double x1 = 0.5 * (x0 + x2);
            return (x2 - x0) / 6.0 * (fn(x0) + 4.0 * fn(x1) + fn(x2));
        };
        const double left = simp(a, m), right = simp(m, b);
        if (depth <= 0 || std::abs(left + right - whole) < 15.0 * fa_fb_eps)
            return left + right + (left + right - whole) / 15.0;
        return adsimp(fn, a, m, 0.5 * fa_fb_eps, left, depth - 1) +
               adsimp(fn, m, b, 0.5 * fa_fb_eps, right, depth - 1);
    };
    auto integrate = [&](std::function<double(double)> fn, double a, double b) {
        if (b <= a) return 0.0;
        const double x1 = 0.5 * (a + b);
        const double whole = (b - a) / 6.0 * (fn(a) + 4.0 * fn(x1) + fn(b));
        return adsimp(fn, a, b, 1e-14 * std::max(1.0, std::abs(whole)), whole, 48);
    };

    const double I_ball = integrate([&](double r) { return u_of_r(r) * r * r; }, 0.0, 1.0);
    const double I_grad_in = integrate([&](double r) { const double d1 = du_of_r(r); return d1 * d1 * r * r; }, 0.0, 1.0);
    const double I_grad_out = integrate([&](double r) { const double d1 = du_of_r(r); return d1 * d1 * r * r; }, 1.0, 1.0 + out.d);
    const double I_pot = integrate([&](double r) { const double u = u_of_r(r); return u * u; }, 1.0, 1.0 + out.d);
    out.f_quadrature = 3.0 * I_ball - 0.5 * 4.0 * M_PI * (I_grad_in + I_grad_out) -
                       0.5 * 4.0 * M_PI * kappa * kappa * gg * gg * I_pot;
    return out;
}

KappaDiagnostic kappa_diagnostic(const Solution& sol, double c1, const Grid& grid) {
    KappaDiagnostic out;
    const double gg = sol.g;
    double ball_psi = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        ball_psi += grid.w_vol_in()[k] * sol.psi.psi.v[k];
    out.matched_value = 3.0 / (8.0 * M_PI) * ball_psi;

    const double f0 = kappa_f_value(0.0, gg, c1);
    const double finf = 1.0 / (40.0 * M_PI);
    if (!(out.matched_value < f0) || !(out.matched_value > finf)) {
        out.exists = false;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (kappa_f_value(hi, gg, c1) > out.matched_value && hi < 1e12) hi *= 2.0;
    for (int k = 0; k < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++k) {
        const double m = 0.5 * (lo + hi);
        if (kappa_f_value(m, gg, c1) > out.matched_value)
            lo = m;
        else
            hi = m;
    }
    out.exists = true;
    out.kappa = 0.5 * (lo + hi);
    out.d = 64.0 * M_PI * c1 / gg;
    const double s = std::sqrt(1.0 + 4.0 * out.kappa * out.kappa * gg * gg);
    out.p = 0.5 * (s + 1.0);
    out.p_prime = 0.5 * (s - 1.0);
    out.f_of_kappa = kappa_f_value(out.kappa, gg, c1);

    GaugeStencil gs(grid);
    EnergyModel model(grid, Coupling(gg), 1e-10);
    const std::vector<double> a = model.pack_outer(sol.alpha);
    out.shell_energy = gs.energy_in_shell(a.data(), 1.0, 1.0 + c1 / gg) / (gg * gg);
    return out;
}

ShellConcentration shell_concentration(const Solution& sol, double c_shell, const Grid& grid) {
    GaugeStencil gs(grid);
    EnergyModel model(grid, Coupling(sol.g), 1e-10);
    const std::vector<double> a = model.pack_outer(sol.alpha);
    const double g2 = sol.g * sol.g;
    ShellConcentration out;
    out.shell_form = gs.energy_in_shell(a.data(), 1.0, 1.0 + c_shell / sol.g) / g2;
    const double total = gs.energy(a.data()) / g2;
    out.ratio_to_g = out.shell_form / sol.g;
    out.fraction_of_total = (total > 0.0) ? out.shell_form / total : 0.0;
    return out;
}

}  // namespace su2stat
