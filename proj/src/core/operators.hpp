#pragma once

#include "banded.hpp"
#include "grid.hpp"

namespace su2stat {

/// Stiffness stencil of the 3D Dirichlet form  a(f,h) = int grad f . grad h dV
/// on the full (r,theta) lattice, with the Robin condition d_r(r f) = 0 built
/// in at r_max (exact for 1/r tails). Assembled in flux form, so the matrix is
/// symmetric to rounding. The radial edge coefficient uses the harmonic mean
/// r_i*r_{i+1}, which integrates 1/r exactly.
class PsiStencil {
  public:
    explicit PsiStencil(const Grid& g);

    const Grid& grid() const { return *grid_; }

    // y = M x  (stiffness only, no potential)
    void apply(const double* x, double* y) const;
    // y = (M + diag(d)) x
    void apply_shifted(const double* x, const double* d, double* y) const;

    const std::vector<double>& diag() const { return diag_; }

    // Dirichlet energy  x' M x  split into inside/outside-ball parts.
    void energy_split(const double* x, double* inside, double* outside) const;

    // Outward flux -int r^2 d_r x dOmega through the face between radial
    // nodes i and i+1 (positive for a decaying positive field).
    double face_flux(const double* x, int i) const;

    // Packs M + diag(extra) into banded lower-Cholesky storage. The node
    // ordering (r-major) gives bandwidth ntheta.
    void assemble_banded(BandedCholesky& B, const double* extra_diag) const;

  private:
    const Grid* grid_;
    std::vector<double> cR_;    // (nr-1) x nt, radial edge coefficients
    std::vector<double> cT_;    // nr x (nt-1), angular edge coefficients
    std::vector<double> rob_;   // nt, Robin boundary diagonal at i = nr-1
    std::vector<double> diag_;
    // fraction of each radial edge's energy attributed to r <= 1 (0 or 1 here,
    // since r = 1 is a node) and of each angular line's weight
    std::vector<double> lenr_in_;  // per radial node: int dr over cell inside ball
};

/// Stiffness stencil of the reduced magnetic form
///   m(a,b) = int r^-2 ( a_r b_r + r^-2 (sin t)^-2 (sin t a)_t (sin t b)_t ) dV
/// on the outer lattice (radial nodes with r >= 1). The angular part is
/// discretized in the flux variable u = sin(theta) a with edge coefficients
/// 1 / int sin dtheta, which treats the axis (u = 0 ghost) without a
/// coordinate singularity. No boundary condition is imposed at r_max; callers
/// impose Dirichlet by zeroing DOFs.
class GaugeStencil {
  public:
    explicit GaugeStencil(const Grid& g);

    const Grid& grid() const { return *grid_; }
    int nro() const { return nro_; }  // outer radial nodes, index 0 is r = 1

    // y = M a on the outer lattice (nro x ntheta arrays).
    void apply(const double* a, double* y) const;
    double energy(const double* a) const;  // a' M a
    // Energy restricted to radial shell faces_lo <= r <= faces_hi (edge-based).
    double energy_in_shell(const double* a, double r_lo, double r_hi) const;

    const std::vector<double>& diag() const { return diag_; }

  private:
    const Grid* grid_;
    int nro_ = 0;
    int i0_ = 0;  // global radial index of r = 1
    std::vector<double> gR_;      // (nro-1) x nt
    std::vector<double> gT_;      // nro x (nt-1), in the u variable
    std::vector<double> gAx0_, gAxPi_;  // nro, axis half-edge terms (u ghost = 0)
    std::vector<double> sin_;     // nt
    std::vector<double> diag_;
    std::vector<double> edge_r_lo_, edge_r_hi_;  // radial extent per edge class
};

/// Discrete axisymmetric Laplacian: (Delta f)_k = -(M f)_k / w_vol_k with the
/// Robin outer condition built in. Second-order on smooth fields.
Field laplacian_axi(const Field& f, const Grid& g, const PsiStencil& st);
Field laplacian_axi(const Field& f, const Grid& g);

/// The linear operator of the gauge Euler-Lagrange equation (without the
/// g^4 psi^2 a term):  -a_rr - r^-2 ((sin t)^-1 (sin t a)_t)_t , evaluated as
/// (M_g a) / (2 pi dr sin dtheta weights). Input must be OutsideBall.
Field gauge_operator(const Field& alpha, const Grid& g, const GaugeStencil& st);
Field gauge_operator(const Field& alpha, const Grid& g);

/// int f dV over the whole domain with w_vol weights.
double integrate(const Grid& g, const Field& f);

}  // namespace su2stat
