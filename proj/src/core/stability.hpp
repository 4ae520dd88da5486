#pragma once

#include "energy.hpp"
#include "minimize.hpp"

#include <vector>

namespace su2stat {

/// Hessian of the reduced energy at the Coulomb solution, as a quadratic form:
///   H0(beta) = g^-2 int_{r>=1} r^-2 (beta_r^2 + r^-2 (sin t)^-2 (sin t beta)_t^2)
///            - g^2  int_{r>=1} r^-2 beta^2 psi_Coul^2 .
double hessian_form(const Field& beta, const Coupling& g, const Grid& grid);

struct EigenResult {
    double lambda_min = 0;
    Field witness;  // minimizing beta, normalized in the r^-4 weight
    int iterations = 0;
    bool converged = false;
};

/// Smallest eigenvalue of the pencil (A_g, N) with A_g the Hessian form and
/// N(beta) = int r^-4 beta^2 dV, minimized by preconditioned Rayleigh-quotient
/// (LOBPCG-style) iteration over fields vanishing at r = 1 (free at r_max).
EigenResult min_eigenvalue(const Coupling& g, const Grid& grid);

/// Dense brute-force eigensolve of the same pencil (test oracle; intended for
/// coarse grids such as 64x16).
double dense_min_eigenvalue(const Coupling& g, const Grid& grid);

struct StabilityReport {
    std::vector<double> g_values;
    std::vector<double> lambda_min;
    double g0_estimate = 0;       // interpolated zero crossing of lambda_min(g)
    double g0_quartic = 0;        // (min over beta of m/c)^(1/4), same quantity
    bool crossing_found = false;
    Field hessian_witness;
};

/// Samples lambda_min(g) on [g_lo, g_hi] and locates the sign change by
/// bisection. When no sign change occurs in range, crossing_found is false
/// (not an error).
StabilityReport threshold_scan(double g_lo, double g_hi, int steps, const Grid& grid);

struct KappaClosedForm {
    double d = 0, p = 0, p_prime = 0;
    double f_value = 0;       // closed-form matching value f(kappa)
    double f_quadrature = 0;  // independent 1D quadrature of the objective at u_kappa
    Field u;                  // the maximizing profile on the grid
};

/// Closed forms of the kappa-diagnostic: the maximizer u_kappa of the cutoff
/// dual objective and its value f(kappa). c1 sets the cutoff width
/// d = 64 pi c1 / g.
KappaClosedForm u_kappa_closed_form(double kappa, const Coupling& g, double c1,
                                    const Grid& grid);
/// f(kappa) alone (cheap, overflow-safe for large kappa).
double kappa_f_value(double kappa, double g, double c1);

struct KappaDiagnostic {
    bool exists = false;
    double kappa = 0;
    double d = 0, p = 0, p_prime = 0;
    double f_of_kappa = 0;
    double matched_value = 0;  // 3 (8 pi)^-1 int_{r<=1} psi
    double shell_energy = 0;   // g^-2 int_U |grad a|^2, U = [1, 1+c1... c_shell/g]
};

/// Solves f(kappa) = 3 (8 pi)^-1 int_{r<=1} psi for kappa (unique when the
/// value lies in the range of f).
KappaDiagnostic kappa_diagnostic(const Solution& sol, double c1, const Grid& grid);

struct ShellConcentration {
    double shell_form = 0;        // g^-2 int_U |grad a|^2 over U = [1, 1+c_shell/g]
    double ratio_to_g = 0;        // shell_form / g
    double fraction_of_total = 0; // shell_form / (g^-2 int |grad a|^2)
};

ShellConcentration shell_concentration(const Solution& sol, double c_shell, const Grid& grid);

}  // namespace su2stat
