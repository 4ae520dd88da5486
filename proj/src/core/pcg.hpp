#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace su2stat {

struct PcgResult {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for SPD operators given as
/// apply callbacks. Deterministic: fixed summation order, no threading.
/// Convergence is ||b - A x|| / ||b|| <= tol (2-norm). x is used as the
/// initial guess (warm start) and holds the solution on return.
PcgResult pcg(const std::function<void(const double*, double*)>& apply_A,
              const std::vector<double>& diag_A,
              const std::vector<double>& b,
              std::vector<double>& x,
              double tol,
              int max_iter);

}  // namespace su2stat
