#pragma once

#include "minimize.hpp"

#include <vector>

namespace su2stat {

struct FitWindow {
    double r_lo = 0, r_hi = 0;  // defaults to [r_max/8, r_max/4] when zero
};

struct AsymptoticsReport {
    double e0 = 0;          // fitted effective charge: r psi -> sqrt(2) g^-2 e0
    double psi0 = 0;        // fitted tail coefficient of psi itself
    double p0_fit = 0;      // fitted exponent of f(r) ~ (4/3) c0 r^-p0
    double p0_formula = 0;  // 0.5 (sqrt(9 - 8 e0^2) - 1) from the fitted e0
    double c0 = 0;          // fitted amplitude of alpha ~ c0 sin(theta) r^-p0
    double m_psi_bound = 0;   // sup r |r psi g^2/sqrt(2) - e0| over the window
    double m_alpha_bound = 0; // sup r |(3/4) f r^p0 - c0| over the window
    double fit_lo = 0, fit_hi = 0;
    double rms_psi = 0, rms_alpha = 0;      // per-fit residual RMS (log space for alpha)
    double angular_mismatch = 0;            // max relative L2 misfit of the sin profile
    bool valid = false;
};

struct PointwiseBounds {
    double sup_rpsi_sqrtg = 0;      // sup_{r>=2} r psi g^(1/2)  (Prop.-4 constant)
    double sup_rpsi_exp = 0;        // sup_{r>=gamma} r psi g^2 e^{g^(1/4)/gamma}
    double inf_ralpha_over_sqrtg = 0;  // inf_{r>=gamma} r alpha / (g^(1/2) sin)
    double gamma = 0;               // onset radius used (window start)
};

/// Least-squares fit of r*psi (sphere-averaged) against a + b/r on the window;
/// e0 = a g^2 / sqrt(2). Throws ConfigError when the window holds < 8 nodes.
double fit_e0(const Solution& sol, const Grid& grid, FitWindow w = {});

/// Log-log fit of f(r) = int alpha sin^2 dtheta; returns (p0_fit, c0) and the
/// angular purity diagnostic.
void fit_decay_exponent(const Solution& sol, const Grid& grid, FitWindow w,
                        double* p0_fit, double* c0, double* rms, double* angular_mismatch);

/// Full report combining both fits, the formula exponent, and the Theorem-2
/// remainder bounds.
AsymptoticsReport analyze_asymptotics(const Solution& sol, const Grid& grid, FitWindow w = {});

PointwiseBounds check_pointwise_bounds(const Solution& sol, const Grid& grid, double gamma = 0);

/// Remainder suprema on a given (possibly shifted) window, using previously
/// fitted e0/p0/c0.
void fit_remainders(const Solution& sol, const Grid& grid, const AsymptoticsReport& rep,
                    FitWindow w, double* m_psi, double* m_alpha);

}  // namespace su2stat
