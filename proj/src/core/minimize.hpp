#pragma once

#include "energy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace su2stat {

struct SolveReport {
    int iterations = 0;
    std::vector<double> energy_history;  // total energy per accepted step
    double final_gradient_norm = 0;
    double wall_time = 0;  // seconds; not serialized (reproducibility)
    bool converged = false;
    std::string message;
};

struct Solution {
    Field alpha;  // outside-ball-only, sign-normalized (>= 0)
    ElectricPotential psi;
    EnergyBreakdown energy;
    double g = 0;
    SolveReport report;
};

struct MinimizeOptions {
    double grad_tol = 1e-8;     // w_vol norm of the reduced gradient
    double energy_tol = 1e-10;  // relative energy decrease
    int max_iters = 50000;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double step_min = 1e-6;  // BB clip range
    double step_max = 1e2;
    // Newton endgame: truncated-CG inner solves with the full linearized
    // operator once the BB phase has settled. BB alone stalls orders of
    // magnitude short of grad_tol on the flat valley, so this is on by
    // default; set false for pure preconditioned descent.
    bool newton_refine = true;
    int newton_max_outer = 40;
};

/// Seed fields ------------------------------------------------------------

/// The negative-Hessian direction of the Coulomb solution,
/// (r^{(1-eps)/2} - 1) sin(theta) with eps = 0.05, smoothly truncated at
/// r_max/2 and normalized to the given sup amplitude.
Field hessian_seed(const Grid& g, double amplitude = 1e-2, double eps = 0.05);

/// Prop.-4 trial amplitude lambda * ramp(r) * plateau(theta). lambda = 0 gives
/// the zero field; otherwise lambda >= 1 and eps in (0, 1/2) are required.
Field trial_alpha(const Coupling& g, double lambda, double eps, const Grid& grid);
/// Defaults lambda = g and eps = scale/g (clamped to (0, 0.49]).
Field trial_alpha_default(const Coupling& g, const Grid& grid, double scale = 1.0);

/// Smooth random outside-ball field with the given sup amplitude,
/// deterministic in the seed.
Field random_seed(const Grid& g, std::uint64_t seed, double amplitude = 1e-2);

/// Line-searched preconditioned gradient descent on the reduced energy with
/// exact inner psi-solves; after each accepted step alpha is replaced by
/// |alpha| (which cannot increase the discrete energy). Returns the best
/// iterate with converged = false if the iteration cap is hit.
Solution minimize(const EnergyModel& model, const Field& init, const MinimizeOptions& opts);

/// Warm-started continuation over an ascending list of couplings. The first
/// solve (and any solve whose predecessor collapsed to zero) is seeded with
/// the Hessian direction. Per-g failures are recorded and the sweep continues.
std::vector<Solution> continuation_sweep(const Grid& grid, const std::vector<double>& g_list,
                                         double lin_tol, const MinimizeOptions& opts);

}  // namespace su2stat
