#pragma once

#include "grid.hpp"
#include "operators.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace su2stat {

/// Source charge density: 3/(4 pi) on the unit ball by default (unit total
/// charge). An optional radial profile rho0(r) with unit integral is accepted
/// as a config extension; values are cell-averaged so the discrete total
/// charge is exactly 1.
struct ChargeModel {
    // Per-node cell average of the density times w_vol == exact cell charge.
    std::vector<double> cell_charge;  // b_k = int_cell rho dV
    std::vector<double> density;      // nodal density values (diagnostics)

    static ChargeModel uniform_ball(const Grid& g);
    // profile(r) >= 0 on [0,1]; normalized so the discrete total is 1.
    static ChargeModel radial_profile(const Grid& g, const std::vector<double>& rho_at_nodes);

    double total() const;  // sum of cell_charge
};

struct ElectricPotential {
    Field psi;                 // whole-domain
    double residual_norm = 0;  // relative linear-solve residual
    int iterations = 0;
};

struct ScreeningFunction {
    Field sigma;               // whole-domain, largest-R solution
    double sigma_origin = 0;   // sigma(0) (sphere-averaged value at r = 0)
    double cutoff_radius = 0;  // the largest R used
    std::vector<double> origin_by_cutoff;  // sigma_R(0) per requested R
    bool monotone_in_R = true;             // sigma_R decreasing pointwise as R grows
};

struct MomentProfile {
    std::vector<double> f_of_r;          // int alpha sin^2 dtheta per radial node
    std::vector<double> q_of_r;          // int psi^2 sin dtheta per radial node
    std::vector<double> sphere_avg_psi;  // int psi dOmega / (4 pi) per radial node
};

struct ChargeDiagnostics {
    MomentProfile moments;
    double screened_charge = 0;          // int |a|^2 psi dV
    std::vector<double> face_flux;       // -int r^2 d_r psi dOmega at faces i+1/2
    std::vector<double> gauss_balance;   // flux + interior screening (should be 1)
    bool sphere_avg_decreasing = true;   // d_r int psi dOmega < 0 for r >= 1
};

enum class LinSolverKind { Direct, Pcg };

/// A factorized (or PCG-wrapped) screened-Poisson operator for a fixed alpha;
/// supports repeated solves against the same matrix (Hessian-vector products,
/// refinement).
class FactorizedK {
  public:
    // Solves K x = rhs to the handle's tolerance; x is also the warm start in
    // PCG mode. Returns the scaled relative residual.
    double solve(const std::vector<double>& rhs, std::vector<double>& x) const;

  private:
    friend class ElectroSolver;
    const PsiStencil* st_ = nullptr;
    std::vector<double> extra_;  // diagonal potential part (w * r^-2 alpha^2)
    std::vector<double> diag_;   // full diagonal, for scaling/preconditioning
    std::shared_ptr<BandedCholesky> chol_;  // null in PCG mode
    double tol_ = 1e-12;
    int max_iter_ = 200000;
    mutable int last_iterations_ = 0;
};

/// Shared assembly context for repeated screened-Poisson solves.
class ElectroSolver {
  public:
    ElectroSolver(const Grid& g, ChargeModel charge,
                  LinSolverKind kind = LinSolverKind::Direct);

    const Grid& grid() const { return *grid_; }
    const PsiStencil& stencil() const { return stencil_; }
    const ChargeModel& charge() const { return charge_; }
    LinSolverKind solver_kind() const { return kind_; }

    /// Builds the solvable operator M + diag(w r^-2 alpha^2) for this alpha.
    FactorizedK factorize(const Field& alpha, double tol) const;

    /// Solves -Delta psi + r^-2 alpha^2 psi = rho with Robin outer boundary
    /// d_r(r psi) = 0. Throws SolverError on non-convergence. If warm is
    /// given it is used as the starting guess (PCG mode).
    ElectricPotential solve_psi(const Field& alpha, double tol, int max_iter = 200000,
                                const Field* warm = nullptr) const;

    /// Solves the cutoff screening problems -Delta s + beta_R r^-2 alpha^2 s = 0,
    /// s -> 1, for each R in cutoffs (ascending), checks the maximum-principle
    /// ordering in R and returns the largest-R solution.
    ScreeningFunction solve_screening(const Field& alpha, const std::vector<double>& cutoffs,
                                      double tol) const;

    ChargeDiagnostics diagnostics(const Field& alpha, const ElectricPotential& psi) const;

    /// Nodal potential term V = r^-2 alpha^2 (zero on the ball).
    std::vector<double> potential_diag(const Field& alpha) const;

  private:
    FactorizedK make_handle(std::vector<double> extra, double tol) const;

    const Grid* grid_;
    PsiStencil stencil_;
    ChargeModel charge_;
    LinSolverKind kind_;
    std::vector<double> b_;  // right-hand side (cell charges)
};

/// Exact Coulomb potential of the uniform unit-charge ball, Eq-(5)-style:
/// (8 pi)^-1 (3 - r^2) inside, (4 pi)^-1 / r outside.
ElectricPotential coulomb_psi(const Grid& g);
double coulomb_psi_value(double r);

/// Dirichlet comparison field (8 pi)^-1 (1 - r^2), extended by zero outside.
double psi_dirichlet_value(double r);

/// The smooth cutoff bump for the screening truncation: 1 on [0,1], smooth
/// monotone to 0 at 2.
double screening_bump(double t);

}  // namespace su2stat
