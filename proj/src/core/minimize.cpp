#include "minimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

namespace su2stat {

namespace {

double smoothstep5(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

// 1 for r <= r0, smooth monotone 0 at r1.
double taper(double r, double r0, double r1) {
    if (r <= r0) return 1.0;
    if (r >= r1) return 0.0;
    return 1.0 - smoothstep5((r - r0) / (r1 - r0));
}

}  // namespace

Field hessian_seed(const Grid& g, double amplitude, double eps) {
    Field f(g, Support::OutsideBall);
    const double q = 0.5 * (1.0 - eps);
    const double r_max = g.spec().r_max;
    double sup = 0.0;
    for (int i = g.ball_index(); i < g.nr(); ++i) {
        const double r = g.r_nodes()[i];
        const double rad = (std::pow(r, q) - 1.0) * taper(r, 0.25 * r_max, 0.5 * r_max);
        for (int j = 0; j < g.ntheta(); ++j) {
            const double v = rad * std::sin(g.theta_nodes()[j]);
            f.v[g.at(i, j)] = v;
            sup = std::max(sup, std::abs(v));
        }
    }
    if (sup > 0.0)
        for (auto& v : f.v) v *= amplitude / sup;
    return f;
}

Field trial_alpha(const Coupling& g, double lambda, double eps, const Grid& grid) {
    Field f(grid, Support::OutsideBall);
    if (lambda == 0.0) return f;
    if (!(lambda >= 1.0)) throw ConfigError("trial_alpha: lambda must be 0 or >= 1");
    if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("trial_alpha: eps must lie in (0, 1/2)");

    auto ramp = [&](double r) {  // 0 on [0,1], 1 on [1+eps, inf); slope < 2/eps
        return smoothstep5((r - 1.0) / eps);
    };
    auto plateau = [&](double th) {  // symmetric about pi/2, chi = lambda*th near the axis
        if (th > 0.5 * M_PI) th = M_PI - th;
        const double t1 = 0.5 / lambda, t2 = 1.0 / lambda;
        if (th <= t1) return lambda * th;
        if (th >= t2) return 1.0;
        return 0.5 + 0.5 * smoothstep5((th - t1) / (t2 - t1));
    };

    for (int i = grid.ball_index(); i < grid.nr(); ++i) {
        const double r = grid.r_nodes()[i];
        // outer taper keeps the trial admissible for the Dirichlet space
        const double rad =
            lambda * ramp(r) * taper(r, 0.25 * grid.spec().r_max, 0.5 * grid.spec().r_max);
        for (int j = 0; j < grid.ntheta(); ++j)
            f.v[grid.at(i, j)] = rad * plateau(grid.theta_nodes()[j]);
    }
    return f;
}

Field trial_alpha_default(const Coupling& g, const Grid& grid, double scale) {
    const double eps = std::clamp(scale / g.g, 1e-6, 0.49);
    const double lambda = std::max(1.0, g.g);
    return trial_alpha(g, lambda, eps, grid);
}

Field random_seed(const Grid& g, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int K = 3, M = 3;
    std::vector<double> c(static_cast<std::size_t>(K) * M);
    for (auto& v : c) v = U(rng);

    Field f(g, Support::OutsideBall);
    const double r_max = g.spec().r_max;
    double sup = 0.0;
    for (int i = g.ball_index(); i < g.nr(); ++i) {
        const double r = g.r_nodes()[i];
        const double cut = taper(r, 0.25 * r_max, 0.5 * r_max);
        for (int j = 0; j < g.ntheta(); ++j) {
            const double th = g.theta_nodes()[j];
            const double s = std::sin(th), co = std::cos(th);
            const double S[3] = {s, s * co, s * s * s};
            double v = 0.0;
            for (int k = 1; k <= K; ++k) {
                const double R = (1.0 - std::exp(-k * (r - 1.0))) * std::exp(-r / (4.0 * k));
                for (int m = 0; m < M; ++m) v += c[(k - 1) * M + m] * R * S[m];
            }
            v *= cut;
            f.v[g.at(i, j)] = v;
            sup = std::max(sup, std::abs(v));
        }
    }
    if (sup > 0.0)
        for (auto& v : f.v) v *= amplitude / sup;
    return f;
}

namespace {

struct DofMap {
    int nro, nt;
    std::size_t n;
    // DOFs are the outer-lattice nodes with 1 <= I <= nro-2 (r = 1 and r_max
    // carry Dirichlet conditions).
};

void project_bc(const DofMap& m, std::vector<double>& a) {
    for (int j = 0; j < m.nt; ++j) {
        a[j] = 0.0;
        a[static_cast<std::size_t>(m.nro - 1) * m.nt + j] = 0.0;
    }
}

double dot_dofs(const DofMap& m, const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (int I = 1; I + 1 < m.nro; ++I) {
        const std::size_t row = static_cast<std::size_t>(I) * m.nt;
        for (int j = 0; j < m.nt; ++j) s += x[row + j] * y[row + j];
    }
    return s;
}

// Shared per-iterate state of the descent.
struct Iterate {
    std::vector<double> a;  // outer-lattice packed alpha
    Field alpha;
    ElectricPotential psi;
    EnergyBreakdown eb;
    std::vector<double> gvec;
    double gnorm = 0;
};

void refresh(const EnergyModel& model, Iterate& s) {
    s.alpha = model.unpack_outer(s.a);
    s.psi = model.solve_psi(s.alpha);
    s.eb = model.reduced_energy(s.alpha, s.psi);
    s.gvec = model.gradient_vector(s.alpha, s.psi);
    s.gnorm = model.gradient_norm(s.gvec);
}

bool debug_on() { return std::getenv("SU2STAT_DEBUG_MIN") != nullptr; }

bool converged_now(const Iterate& s, const std::vector<double>& hist,
                   const MinimizeOptions& opts) {
    if (hist.size() < 2) return false;
    if (s.gnorm >= opts.grad_tol) return false;
    const double de = std::abs(hist[hist.size() - 1] - hist[hist.size() - 2]);
    return de <= opts.energy_tol * std::max(1.0, std::abs(s.eb.total));
}

}  // namespace

Solution minimize(const EnergyModel& model, const Field& init, const MinimizeOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    const Grid& grid = model.grid();
    const GaugeStencil& gauge = model.gauge();
    const int nt = grid.ntheta(), nro = gauge.nro(), i0 = grid.ball_index();
    const DofMap dm{nro, nt, static_cast<std::size_t>(nro) * nt};
    const double g2 = model.coupling().g * model.coupling().g;

    model.clear_warm_start();

    // Jacobi preconditioner built from the gauge operator's diagonal.
    std::vector<double> P(dm.n, 1.0);
    for (std::size_t k = 0; k < dm.n; ++k) P[k] = std::max(gauge.diag()[k] / g2, 1e-300);

    Iterate s;
    s.a = model.pack_outer(init);
    project_bc(dm, s.a);
    for (auto& v : s.a) v = std::abs(v);
    refresh(model, s);

    SolveReport rep;
    rep.energy_history.push_back(s.eb.total);

    std::vector<double> a_prev, g_prev, d(dm.n, 0.0), a_trial(dm.n, 0.0);
    double step = 1.0;
    bool have_pair = false;
    bool converged = false;
    int it = 0;
    int newton_strikes = 0;

    auto eval_at = [&](const std::vector<double>& dir, double t, Iterate& out) {
        for (std::size_t k = 0; k < dm.n; ++k) a_trial[k] = s.a[k] + t * dir[k];
        project_bc(dm, a_trial);
        for (auto& v : a_trial) v = std::abs(v);  // sign projection, never raises energy
        out.a = a_trial;
        out.alpha = model.unpack_outer(out.a);
        out.psi = model.solve_psi(out.alpha);
        out.eb = model.reduced_energy(out.alpha, out.psi);
    };

    // Sufficient decrease with an evaluation-noise allowance, but never an
    // energy increase (the history stays non-increasing exactly).
    auto try_step = [&](const std::vector<double>& dir, double t, double dir_deriv,
                        Iterate& out) {
        eval_at(dir, t, out);
        const double noise = 1e-13 * (1.0 + std::abs(s.eb.total));
        const double target = s.eb.total + std::min(opts.armijo_c * t * dir_deriv + noise, 0.0);
        return out.eb.total <= target;
    };

    auto commit = [&](Iterate& trial) {
        s.a = trial.a;
        s.alpha = std::move(trial.alpha);
        s.psi = std::move(trial.psi);
        s.eb = trial.eb;
        s.gvec = model.gradient_vector(s.alpha, s.psi);
        s.gnorm = model.gradient_norm(s.gvec);
        rep.energy_history.push_back(s.eb.total);
        ++it;
    };

    while (it < opts.max_iters && !converged) {
        // ---- Barzilai-Borwein phase -------------------------------------
        const int bb_block_end = std::min(opts.max_iters, it + 400);
        int bb_in_block = 0;
        while (it < bb_block_end) {
            if (converged_now(s, rep.energy_history, opts)) {
                converged = true;
                break;
            }
            // optional handoff to the Newton endgame once the iterate has
            // settled (small gradient and flat recent energy)
            if (opts.newton_refine && bb_in_block >= 60 &&
                s.gnorm < 1e-3 * (1.0 + std::abs(s.eb.total))) {
                const std::size_t n_hist = rep.energy_history.size();
                const double de = std::abs(rep.energy_history[n_hist - 1] -
                                           rep.energy_history[n_hist - 2]);
                if (de < 1e-5 * (1.0 + std::abs(s.eb.total))) break;
            }

            double dir_deriv = 0.0;
            for (int I = 1; I + 1 < nro; ++I)
                for (int j = 0; j < nt; ++j) {
                    const std::size_t k = static_cast<std::size_t>(I) * nt + j;
                    d[k] = -s.gvec[k] / P[k];
                    dir_deriv += s.gvec[k] * d[k];
                }
            if (!(dir_deriv < 0.0)) {
                converged = converged_now(s, rep.energy_history, opts);
                break;  // numerically flat
            }

            if (have_pair) {  // BB1 step in the P metric
                double sPs = 0.0, sy = 0.0;
                for (int I = 1; I + 1 < nro; ++I)
                    for (int j = 0; j < nt; ++j) {
                        const std::size_t k = static_cast<std::size_t>(I) * nt + j;
                        const double sk = s.a[k] - a_prev[k];
                        sPs += sk * P[k] * sk;
                        sy += sk * (s.gvec[k] - g_prev[k]);
                    }
                if (sy > 0.0) step = sPs / sy;
            }
            step = std::clamp(step, opts.step_min, opts.step_max);

            double t = step;
            bool accepted = false;
            Iterate trial;
            for (int bt = 0; bt < 60; ++bt) {
                if (try_step(d, t, dir_deriv, trial)) {
                    accepted = true;
                    break;
                }
                t *= opts.backtrack;
            }
            if (!accepted) {
                converged = converged_now(s, rep.energy_history, opts);
                break;
            }
            a_prev = s.a;
            g_prev = s.gvec;
            commit(trial);
            have_pair = true;
            step = t;
            ++bb_in_block;
            if (debug_on() && it % 50 == 0)
                std::fprintf(stderr, "[bb] it=%d E=%.14g gnorm=%.3e t=%.2e\n", it, s.eb.total,
                             s.gnorm, t);
        }
        if (converged || it >= opts.max_iters || !opts.newton_refine) break;

        // ---- Newton endgame (truncated CG on the analytic Hessian) -------
        const double gnorm_at_entry = s.gnorm;
        bool newton_progress = false;
        for (int outer = 0; outer < opts.newton_max_outer && it < opts.max_iters; ++outer) {
            if (converged_now(s, rep.energy_history, opts)) {
                converged = true;
                break;
            }
            const auto& w = grid.w_vol();
            std::vector<double> diag_psi2(dm.n), vfac(dm.n);
            for (int I = 0; I < nro; ++I) {
                const double r = grid.r_nodes()[i0 + I];
                for (int j = 0; j < nt; ++j) {
                    const std::size_t k = static_cast<std::size_t>(I) * nt + j;
                    const std::size_t kg = grid.at(i0 + I, j);
                    const double p = s.psi.psi.v[kg];
                    diag_psi2[k] = g2 * w[kg] * p * p / (r * r);
                    vfac[k] = w[kg] * s.a[k] * p / (r * r);
                }
            }
            // Response solves may run a touch looser; the convergence test
            // always uses exact-gradient evaluations.
            FactorizedK K =
                model.electro().factorize(s.alpha, std::max(model.lin_tol(), 1e-10));

            auto hess_apply = [&](const std::vector<double>& x, std::vector<double>& y) {
                std::vector<double> xb = x;
                project_bc(dm, xb);
                gauge.apply(xb.data(), y.data());
                for (std::size_t k = 0; k < dm.n; ++k)
                    y[k] = 2.0 * kEnergyScale * (y[k] / g2 - diag_psi2[k] * xb[k]);
                std::vector<double> rhs(grid.size(), 0.0), sol(grid.size(), 0.0);
                for (int I = 0; I < nro; ++I)
                    for (int j = 0; j < nt; ++j)
                        rhs[grid.at(i0 + I, j)] = vfac[static_cast<std::size_t>(I) * nt + j] *
                                                  xb[static_cast<std::size_t>(I) * nt + j];
                K.solve(rhs, sol);
                for (int I = 0; I < nro; ++I)
                    for (int j = 0; j < nt; ++j) {
                        const std::size_t k = static_cast<std::size_t>(I) * nt + j;
                        y[k] += 8.0 * kEnergyScale * g2 * vfac[k] * sol[grid.at(i0 + I, j)];
                    }
                project_bc(dm, y);
            };

            // Truncated CG for H dn = -g, harvesting a negative-curvature
            // direction when the Hessian is indefinite (saddle transit).
            std::vector<double> rr = s.gvec, zz(dm.n), pp(dm.n), Hp(dm.n), dn(dm.n, 0.0);
            std::vector<double> neg_dir;
            for (auto& v : rr) v = -v;
            project_bc(dm, rr);
            const double rnorm0 = std::sqrt(dot_dofs(dm, rr, rr));
            for (std::size_t k = 0; k < dm.n; ++k) zz[k] = rr[k] / P[k];
            pp = zz;
            double rz = dot_dofs(dm, rr, zz);
            for (int cg = 0; cg < 250; ++cg) {
                hess_apply(pp, Hp);
                const double pHp = dot_dofs(dm, pp, Hp);
                if (!(pHp > 0.0)) {
                    neg_dir = pp;
                    break;  // keep dn accumulated so far
                }
                const double alpha_cg = rz / pHp;
                for (std::size_t k = 0; k < dm.n; ++k) {
                    dn[k] += alpha_cg * pp[k];
                    rr[k] -= alpha_cg * Hp[k];
                }
                if (std::sqrt(dot_dofs(dm, rr, rr)) < 0.1 * rnorm0) break;
                for (std::size_t k = 0; k < dm.n; ++k) zz[k] = rr[k] / P[k];
                const double rz_new = dot_dofs(dm, rr, zz);
                for (std::size_t k = 0; k < dm.n; ++k) pp[k] = zz[k] + (rz_new / rz) * pp[k];
                rz = rz_new;
            }

            bool moved = false;
            const double E_before = s.eb.total;

            // Newton (or partial-CG) step with backtracking.
            double dir_deriv = dot_dofs(dm, s.gvec, dn);
            if (dir_deriv < 0.0) {
                double t = 1.0;
                Iterate trial;
                for (int bt = 0; bt < 40; ++bt) {
                    if (try_step(dn, t, dir_deriv, trial)) {
                        commit(trial);
                        moved = true;
                        break;
                    }
                    t *= opts.backtrack;
                }
            }

            // Negative-curvature escape: the quadratic model is unbounded
            // below along neg_dir, so search with doubling steps.
            if (!neg_dir.empty() &&
                (!moved || s.eb.total > E_before - 1e-9 * (1.0 + std::abs(E_before)))) {
                if (dot_dofs(dm, s.gvec, neg_dir) > 0.0)
                    for (auto& v : neg_dir) v = -v;
                const double nd = std::sqrt(dot_dofs(dm, neg_dir, neg_dir));
                if (nd > 0.0) {
                    const double base = std::sqrt(dot_dofs(dm, s.a, s.a));
                    // start at a step comparable to the iterate scale
                    double t = std::max(1e-3 * (base + 1e-3) / nd, 1e-6);
                    Iterate trial, best;
                    bool have_best = false;
                    for (int expand = 0; expand < 48; ++expand) {
                        eval_at(neg_dir, t, trial);
                        if (trial.eb.total < (have_best ? best.eb.total : s.eb.total)) {
                            best = trial;
                            have_best = true;
                            t *= 2.0;
                        } else if (!have_best) {
                            t *= 0.25;  // overshoot: shrink until decrease appears
                            if (t < 1e-14) break;
                        } else {
                            break;
                        }
                    }
                    if (have_best && best.eb.total < s.eb.total) {
                        commit(best);
                        moved = true;
                    }
                }
            }

            if (!moved) break;
            have_pair = false;  // BB pair is stale after a Newton-phase step
            if (debug_on())
                std::fprintf(stderr, "[newton] it=%d E=%.14g gnorm=%.3e%s\n", it, s.eb.total,
                             s.gnorm, neg_dir.empty() ? "" : " (escape)");
            if (s.gnorm < 0.5 * gnorm_at_entry ||
                s.eb.total < E_before - 1e-8 * (1.0 + std::abs(E_before)))
                newton_progress = true;
            if (converged_now(s, rep.energy_history, opts)) {
                converged = true;
                break;
            }
        }
        if (converged) break;
        if (!newton_progress) {
            if (++newton_strikes >= 3) break;  // not converging; stop honestly
        } else {
            newton_strikes = 0;
        }
    }

    Solution sol;
    sol.alpha = std::move(s.alpha);
    sol.psi = std::move(s.psi);
    sol.energy = s.eb;
    sol.g = model.coupling().g;
    rep.iterations = it;
    rep.final_gradient_norm = s.gnorm;
    rep.converged = converged;
    if (!converged)
        rep.message = "did not reach tolerances (gradient norm " + std::to_string(s.gnorm) +
                      " after " + std::to_string(it) + " iterations)";
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    sol.report = std::move(rep);
    return sol;
}

std::vector<Solution> continuation_sweep(const Grid& grid, const std::vector<double>& g_list,
                                         double lin_tol, const MinimizeOptions& opts) {
    for (std::size_t i = 1; i < g_list.size(); ++i)
        if (!(g_list[i] > g_list[i - 1]))
            throw ConfigError("continuation_sweep: g_list must be ascending");

    std::vector<Solution> out;
    out.reserve(g_list.size());
    const Field* prev = nullptr;
    for (double gv : g_list) {
        EnergyModel model(grid, Coupling(gv), lin_tol);
        Field seed;
        bool warm = false;
        if (prev) {
            double sup = 0.0;
            for (double v : prev->v) sup = std::max(sup, std::abs(v));
            if (sup > 1e-7) {
                seed = *prev;
                warm = true;
            }
        }
        if (!warm) seed = hessian_seed(grid);
        try {
            out.push_back(minimize(model, seed, opts));
        } catch (const std::exception& e) {
            Solution failed;
            failed.alpha = Field(grid, Support::OutsideBall);
            failed.psi = coulomb_psi(grid);
            failed.g = gv;
            failed.report.converged = false;
            failed.report.message = e.what();
            out.push_back(std::move(failed));
        }
        prev = &out.back().alpha;
    }
    return out;
}

}  // namespace su2stat
