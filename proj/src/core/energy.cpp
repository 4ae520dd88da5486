#include "energy.hpp"

#include <cmath>

namespace su2stat {

EnergyModel::EnergyModel(const Grid& g, Coupling coupling, double lin_tol)
    : EnergyModel(g, coupling, lin_tol, ChargeModel::uniform_ball(g)) {}

EnergyModel::EnergyModel(const Grid& g, Coupling coupling, double lin_tol, ChargeModel charge,
                         LinSolverKind kind)
    : grid_(&g), g_(coupling), lin_tol_(lin_tol), electro_(g, std::move(charge), kind),
      gauge_(g) {}

ElectricPotential EnergyModel::solve_psi(const Field& alpha) const {
    ElectricPotential p =
        electro_.solve_psi(alpha, lin_tol_, 200000, has_warm_ ? &warm_ : nullptr);
    warm_ = p.psi;
    has_warm_ = true;
    return p;
}

void EnergyModel::clear_warm_start() const { has_warm_ = false; }

std::vector<double> EnergyModel::pack_outer(const Field& alpha) const {
    const Grid& g = *grid_;
    const int nt = g.ntheta(), i0 = g.ball_index(), nro = gauge_.nro();
    std::vector<double> a(static_cast<std::size_t>(nro) * nt);
    for (int I = 0; I < nro; ++I)
        for (int j = 0; j < nt; ++j)
            a[static_cast<std::size_t>(I) * nt + j] = alpha.v[g.at(i0 + I, j)];
    return a;
}

Field EnergyModel::unpack_outer(const std::vector<double>& a) const {
    const Grid& g = *grid_;
    Field f(g, Support::OutsideBall);
    const int nt = g.ntheta(), i0 = g.ball_index(), nro = gauge_.nro();
    for (int I = 1; I < nro; ++I)  // I = 0 is r = 1, kept at zero
        for (int j = 0; j < nt; ++j)
            f.v[g.at(i0 + I, j)] = a[static_cast<std::size_t>(I) * nt + j];
    return f;
}

EnergyBreakdown EnergyModel::reduced_energy(const Field& alpha) const {
    return reduced_energy(alpha, solve_psi(alpha));
}

EnergyBreakdown EnergyModel::reduced_energy(const Field& alpha,
                                            const ElectricPotential& pot) const {
    const Grid& g = *grid_;
    const double gg = g_.g;
    EnergyBreakdown e;

    // Reported scale: kEnergyScale times the quadratic-form quadrature, which
    // places the Coulomb baseline at 3 g^2/(40 pi) and the fully screened
    // electric floor at g^2/(80 pi). The minimizing field, the instability
    // threshold and every identity ratio are invariant under this overall
    // scale; kEnergyNormDoubled recovers the form-level value where a result
    // is stated against the g^2/(40 pi) + O(g) floor.
    const std::vector<double> a = pack_outer(alpha);
    const double mag_form = gauge_.energy(a.data());
    e.magnetic = kEnergyScale / (gg * gg) * mag_form;

    double din = 0.0, dout = 0.0;
    electro_.stencil().energy_split(pot.psi.v.data(), &din, &dout);
    e.electric_inside = kEnergyScale * gg * gg * din;
    e.electric_outside = kEnergyScale * gg * gg * dout;

    const std::vector<double> V = electro_.potential_diag(alpha);
    const auto& w = g.w_vol();
    double inter = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double p = pot.psi.v[k];
        inter += w[k] * V[k] * p * p;
    }
    e.interaction = kEnergyScale * gg * gg * inter;

    e.total = e.magnetic + e.electric_inside + e.electric_outside + e.interaction;
    // Independent re-summation (same quadrature, fused order).
    e.total_direct = kEnergyScale / (gg * gg) * mag_form + kEnergyScale * gg * gg * (din + dout + inter);

    double rho_psi = 0.0;
    const auto& b = electro_.charge().cell_charge;
    for (std::size_t k = 0; k < g.size(); ++k) rho_psi += b[k] * pot.psi.v[k];
    e.electric_via_charge = kEnergyScale * gg * gg * rho_psi;
    return e;
}

std::vector<double> EnergyModel::gradient_vector(const Field& alpha,
                                                 const ElectricPotential& pot) const {
    const Grid& g = *grid_;
    const double gg = g_.g;
    const int nt = g.ntheta(), i0 = g.ball_index(), nro = gauge_.nro();

    const std::vector<double> a = pack_outer(alpha);
    std::vector<double> y(a.size());
    gauge_.apply(a.data(), y.data());

    const double inv_g2 = 1.0 / (gg * gg);
    const double g2 = gg * gg;
    std::vector<double> grad(a.size(), 0.0);
    for (int I = 0; I < nro; ++I) {
        const double r = g.r_nodes()[i0 + I];
        const double inv_r2 = 1.0 / (r * r);
        for (int j = 0; j < nt; ++j) {
            const std::size_t k = static_cast<std::size_t>(I) * nt + j;
            const std::size_t kg = g.at(i0 + I, j);
            const double p = pot.psi.v[kg];
            grad[k] = 2.0 * kEnergyScale *
                      (inv_g2 * y[k] - g2 * g.w_vol()[kg] * inv_r2 * p * p * a[k]);
        }
    }
    return grad;
}

double EnergyModel::gradient_norm(const std::vector<double>& gvec) const {
    const Grid& g = *grid_;
    const int nt = g.ntheta(), i0 = g.ball_index(), nro = gauge_.nro();
    double s = 0.0;
    // Interior gauge DOFs only (r = 1 and r = r_max are Dirichlet).
    for (int I = 1; I + 1 < nro; ++I)
        for (int j = 0; j < nt; ++j) {
            const std::size_t k = static_cast<std::size_t>(I) * nt + j;
            s += gvec[k] * gvec[k] / g.w_vol()[g.at(i0 + I, j)];
        }
    return std::sqrt(s);
}

Field EnergyModel::reduced_gradient(const Field& alpha, const ElectricPotential& pot) const {
    const Grid& g = *grid_;
    std::vector<double> gvec = gradient_vector(alpha, pot);
    Field out(g, Support::OutsideBall);
    const int nt = g.ntheta(), i0 = g.ball_index(), nro = gauge_.nro();
    for (int I = 1; I < nro; ++I)
        for (int j = 0; j < nt; ++j) {
            const std::size_t kg = g.at(i0 + I, j);
            out.v[kg] = gvec[static_cast<std::size_t>(I) * nt + j] / g.w_vol()[kg];
        }
    return out;
}

}  // namespace su2stat
