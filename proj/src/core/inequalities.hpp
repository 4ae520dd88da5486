#pragma once

#include "grid.hpp"

#include <cstdint>

namespace su2stat {

struct InequalityReport {
    // Worst LHS/RHS ratio observed per inequality (<= 1 + slack to pass):
    //   1: int_{r>=1} r^-2 f^2 dr <= 4 int f_r^2 dr          (f(1) = 0)
    //   2: int_{r>=1} f^2 dr      <= 4 int f_r^2 r^2 dr      (f -> 0)
    //   3: int sin f^2 dtheta     <= 2^-1 int (sin)^-1 ((sin f)_t)^2 dtheta
    double worst_ratio[3] = {0, 0, 0};
    int samples = 0;
    double slack = 0;  // allowed O(h^2) headroom
    bool pass = true;
};

/// Evaluates both sides of the three Hardy/Sturm-Liouville inequalities on
/// random piecewise-smooth test functions via grid quadrature.
InequalityReport validate_inequalities(const Grid& g, int samples, std::uint64_t seed = 2026);

}  // namespace su2stat
