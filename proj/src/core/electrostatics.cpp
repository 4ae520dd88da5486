#include "electrostatics.hpp"

#include "pcg.hpp"

#include <cmath>

namespace su2stat {

ChargeModel ChargeModel::uniform_ball(const Grid& g) {
    ChargeModel c;
    const double rho0 = 3.0 / (4.0 * M_PI);
    c.cell_charge.resize(g.size());
    c.density.resize(g.size());
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.ntheta(); ++j) {
            const std::size_t k = g.at(i, j);
            c.cell_charge[k] = rho0 * g.w_vol_in()[k];
            c.density[k] = (g.r_nodes()[i] <= 1.0) ? rho0 : 0.0;
        }
    return c;
}

ChargeModel ChargeModel::radial_profile(const Grid& g, const std::vector<double>& rho_at_nodes) {
    if (rho_at_nodes.size() != static_cast<std::size_t>(g.nr()))
        throw ConfigError("ChargeModel: profile must have one value per radial node");
    ChargeModel c;
    c.cell_charge.assign(g.size(), 0.0);
    c.density.assign(g.size(), 0.0);
    double total = 0.0;
    for (int i = 0; i < g.nr(); ++i) {
        if (rho_at_nodes[i] < 0.0) throw ConfigError("ChargeModel: density must be >= 0");
        for (int j = 0; j < g.ntheta(); ++j) {
            const std::size_t k = g.at(i, j);
            c.cell_charge[k] = rho_at_nodes[i] * g.w_vol_in()[k];
            c.density[k] = (g.r_nodes()[i] <= 1.0) ? rho_at_nodes[i] : 0.0;
            total += c.cell_charge[k];
        }
    }
    if (total <= 0.0) throw ConfigError("ChargeModel: profile has zero total charge");
    for (auto& v : c.cell_charge) v /= total;
    for (auto& v : c.density) v /= total;
    return c;
}

double ChargeModel::total() const {
    double s = 0.0;
    for (double v : cell_charge) s += v;
    return s;
}

ElectroSolver::ElectroSolver(const Grid& g, ChargeModel charge, LinSolverKind kind)
    : grid_(&g), stencil_(g), charge_(std::move(charge)), kind_(kind) {
    b_ = charge_.cell_charge;
}

double FactorizedK::solve(const std::vector<double>& rhs, std::vector<double>& x) const {
    const std::size_t n = rhs.size();
    auto apply = [&](const double* in, double* out) {
        st_->apply_shifted(in, extra_.data(), out);
    };
    auto scaled_residual = [&](const std::vector<double>& xx, std::vector<double>& r) {
        std::vector<double> Ax(n);
        apply(xx.data(), Ax.data());
        double s = 0.0, bs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = rhs[k] - Ax[k];
            s += r[k] * r[k] / diag_[k];
            bs += rhs[k] * rhs[k] / diag_[k];
        }
        return (bs > 0.0) ? std::sqrt(s / bs) : 0.0;
    };

    if (chol_) {
        if (x.size() != n) x.assign(n, 0.0);
        chol_->solve(rhs.data(), x.data());
        std::vector<double> r(n), dx(n);
        double res = scaled_residual(x, r);
        last_iterations_ = 1;
        for (int pass = 0; pass < 8 && res > tol_; ++pass) {  // iterative refinement
            chol_->solve(r.data(), dx.data());
            for (std::size_t k = 0; k < n; ++k) x[k] += dx[k];
            const double res_new = scaled_residual(x, r);
            ++last_iterations_;
            if (res_new > 0.5 * res) {
                res = std::min(res, res_new);
                break;  // refinement stalled at the attainable floor
            }
            res = res_new;
        }
        if (res > tol_) {
            SolverError err("direct solve: residual " + std::to_string(res) +
                            " above tol after refinement");
            err.last_residual = res;
            throw err;
        }
        return res;
    }
    if (x.size() != n) x.assign(n, 0.0);
    PcgResult pr = pcg(apply, diag_, rhs, x, tol_, max_iter_);
    last_iterations_ = pr.iterations;
    if (!pr.converged) {
        SolverError err("pcg: failed to reach tol=" + std::to_string(tol_) + " (residual " +
                        std::to_string(pr.rel_residual) + " after " +
                        std::to_string(pr.iterations) + " iterations)");
        err.last_residual = pr.rel_residual;
        throw err;
    }
    return pr.rel_residual;
}

FactorizedK ElectroSolver::make_handle(std::vector<double> extra, double tol) const {
    FactorizedK f;
    f.st_ = &stencil_;
    f.tol_ = tol;
    f.extra_ = std::move(extra);
    f.diag_.resize(grid_->size());
    for (std::size_t k = 0; k < grid_->size(); ++k)
        f.diag_[k] = stencil_.diag()[k] + f.extra_[k];
    if (kind_ == LinSolverKind::Direct) {
        f.chol_ = std::make_shared<BandedCholesky>();
        stencil_.assemble_banded(*f.chol_, f.extra_.data());
        if (!f.chol_->factor())
            throw SolverError("factorize: banded Cholesky pivot failure (matrix not SPD)");
    }
    return f;
}

FactorizedK ElectroSolver::factorize(const Field& alpha, double tol) const {
    const Grid& g = *grid_;
    const std::vector<double> V = potential_diag(alpha);
    std::vector<double> extra(g.size());
    const auto& w = g.w_vol();
    for (std::size_t k = 0; k < g.size(); ++k) extra[k] = w[k] * V[k];
    return make_handle(std::move(extra), tol);
}

std::vector<double> ElectroSolver::potential_diag(const Field& alpha) const {
    const Grid& g = *grid_;
    std::vector<double> V(g.size(), 0.0);
    const int ib = g.ball_index();
    for (int i = ib; i < g.nr(); ++i) {
        const double r = g.r_nodes()[i];
        const double inv_r2 = 1.0 / (r * r);
        for (int j = 0; j < g.ntheta(); ++j) {
            const double a = alpha.v[g.at(i, j)];
            V[g.at(i, j)] = inv_r2 * a * a;
        }
    }
    return V;
}

ElectricPotential ElectroSolver::solve_psi(const Field& alpha, double tol, int max_iter,
                                           const Field* warm) const {
    if (alpha.support != Support::OutsideBall)
        throw std::invalid_argument("solve_psi: alpha must be OutsideBall");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_psi: tol must be positive");

    const Grid& g = *grid_;
    FactorizedK f = factorize(alpha, tol);
    f.max_iter_ = max_iter;

    ElectricPotential out;
    out.psi = Field(g, Support::WholeDomain);
    if (warm && warm->v.size() == g.size()) out.psi.v = warm->v;
    out.residual_norm = f.solve(b_, out.psi.v);
    out.iterations = f.last_iterations_;
    return out;
}

ScreeningFunction ElectroSolver::solve_screening(const Field& alpha,
                                                 const std::vector<double>& cutoffs,
                                                 double tol) const {
    if (alpha.support != Support::OutsideBall)
        throw std::invalid_argument("solve_screening: alpha must be OutsideBall");
    if (cutoffs.empty()) throw std::invalid_argument("solve_screening: need at least one cutoff");

    const Grid& g = *grid_;
    const std::vector<double> V = potential_diag(alpha);
    const auto& w = g.w_vol();

    ScreeningFunction out;
    out.monotone_in_R = true;
    std::vector<double> prev;  // sigma for the previous (smaller) R
    std::vector<double> v(g.size(), 0.0);

    std::vector<double> R_sorted = cutoffs;
    std::sort(R_sorted.begin(), R_sorted.end());

    for (double R : R_sorted) {
        if (!(R > 1.0)) throw std::invalid_argument("solve_screening: cutoffs must exceed 1");
        // sigma = 1 - v with  (M + diag(w bR V)) v = w bR V
        std::vector<double> d(g.size()), rhs(g.size());
        for (int i = 0; i < g.nr(); ++i) {
            const double bR = screening_bump(g.r_nodes()[i] / R);
            for (int j = 0; j < g.ntheta(); ++j) {
                const std::size_t k = g.at(i, j);
                d[k] = w[k] * bR * V[k];
                rhs[k] = d[k];
            }
        }
        FactorizedK f = make_handle(std::move(d), tol);
        f.solve(rhs, v);
        std::vector<double> sigma(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) sigma[k] = 1.0 - v[k];

        double origin = 0.0;
        for (int j = 0; j < g.ntheta(); ++j)
            origin += sigma[g.at(0, j)] * g.w_sphere()[j];
        origin *= 0.5;
        out.origin_by_cutoff.push_back(origin);

        if (!prev.empty()) {
            // larger R screens more: sigma_R <= sigma_{R'} for R > R'
            for (std::size_t k = 0; k < g.size(); ++k)
                if (sigma[k] > prev[k] + 1e-11) {
                    out.monotone_in_R = false;
                    break;
                }
        }
        prev = sigma;
        out.sigma = Field(g, Support::WholeDomain);
        out.sigma.v = std::move(sigma);
        out.sigma_origin = origin;
        out.cutoff_radius = R;
    }
    return out;
}

ChargeDiagnostics ElectroSolver::diagnostics(const Field& alpha,
                                             const ElectricPotential& pot) const {
    const Grid& g = *grid_;
    const int nr = g.nr(), nt = g.ntheta(), ib = g.ball_index();
    const auto& psi = pot.psi.v;

    ChargeDiagnostics out;
    out.moments.f_of_r.assign(nr, 0.0);
    out.moments.q_of_r.assign(nr, 0.0);
    out.moments.sphere_avg_psi.assign(nr, 0.0);
    const double dth = g.dtheta();
    for (int i = 0; i < nr; ++i) {
        double f = 0.0, q = 0.0, avg = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double s = std::sin(g.theta_nodes()[j]);
            const std::size_t k = g.at(i, j);
            f += alpha.v[k] * s * s * dth;
            q += psi[k] * psi[k] * g.w_sphere()[j];
            avg += psi[k] * g.w_sphere()[j];
        }
        out.moments.f_of_r[i] = f;
        out.moments.q_of_r[i] = q;
        out.moments.sphere_avg_psi[i] = 0.5 * avg;  // mean over the sphere
    }

    const std::vector<double> V = potential_diag(alpha);
    const auto& w = g.w_vol();
    double sc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) sc += w[k] * V[k] * psi[k];
    out.screened_charge = sc;

    out.face_flux.assign(nr - 1, 0.0);
    out.gauss_balance.assign(nr - 1, 0.0);
    // cumulative interior screening up to face i+1/2 (node-cell based)
    double interior = 0.0;
    std::vector<double> cum(nr, 0.0);
    for (int i = 0; i < nr; ++i) {
        double s = 0.0;
        for (int j = 0; j < nt; ++j) s += w[g.at(i, j)] * V[g.at(i, j)] * psi[g.at(i, j)];
        interior += s;
        cum[i] = interior;
    }
    for (int i = 0; i + 1 < nr; ++i) {
        out.face_flux[i] = stencil_.face_flux(psi.data(), i);
        out.gauss_balance[i] = out.face_flux[i] + cum[i];
    }

    out.sphere_avg_decreasing = true;
    for (int i = std::max(ib, 1); i + 1 < nr; ++i)
        if (!(out.moments.sphere_avg_psi[i + 1] < out.moments.sphere_avg_psi[i]))
            out.sphere_avg_decreasing = false;
    return out;
}

double coulomb_psi_value(double r) {
    return (r <= 1.0) ? (3.0 - r * r) / (8.0 * M_PI) : 1.0 / (4.0 * M_PI * r);
}

double psi_dirichlet_value(double r) {
    return (r <= 1.0) ? (1.0 - r * r) / (8.0 * M_PI) : 0.0;
}

ElectricPotential coulomb_psi(const Grid& g) {
    ElectricPotential out;
    out.psi = Field(g, Support::WholeDomain);
    for (int i = 0; i < g.nr(); ++i) {
        const double v = coulomb_psi_value(g.r_nodes()[i]);
        for (int j = 0; j < g.ntheta(); ++j) out.psi.v[g.at(i, j)] = v;
    }
    out.residual_norm = 0.0;
    return out;
}

double screening_bump(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double u = t - 1.0;  // quintic smoothstep, C^2 at both ends
    return 1.0 - (u * u * u * (10.0 - 15.0 * u + 6.0 * u * u));
}

}  // namespace su2stat
