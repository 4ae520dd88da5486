#include "operators.hpp"

#include <cmath>

namespace su2stat {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

PsiStencil::PsiStencil(const Grid& g) : grid_(&g) {
    const int nr = g.nr(), nt = g.ntheta();
    const auto& r = g.r_nodes();
    const auto& ws = g.w_sphere();
    const auto& len = g.len_r();
    const double dth = g.dtheta();

    cR_.assign(static_cast<std::size_t>(nr - 1) * nt, 0.0);
    cT_.assign(static_cast<std::size_t>(nr) * (nt - 1), 0.0);
    rob_.assign(nt, 0.0);
    lenr_in_.assign(nr, 0.0);

    for (int i = 0; i < nr; ++i) {
        const double a = g.r_faces()[i], b = g.r_faces()[i + 1];
        lenr_in_[i] = std::max(0.0, std::min(b, 1.0) - std::min(a, 1.0));
    }

    for (int i = 0; i + 1 < nr; ++i) {
        const double h = r[i + 1] - r[i];
        // r^2 coefficient: harmonic choice r_i r_{i+1} (exact for 1/r); the
        // first edge touches r = 0, where the midpoint value is correct.
        const double r2 = (i == 0) ? 0.25 * (r[0] + r[1]) * (r[0] + r[1]) : r[i] * r[i + 1];
        for (int j = 0; j < nt; ++j)
            cR_[static_cast<std::size_t>(i) * nt + j] = kTwoPi * ws[j] * r2 / h;
    }
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j + 1 < nt; ++j) {
            const double s_edge = std::sin((j + 1) * dth);
            cT_[static_cast<std::size_t>(i) * (nt - 1) + j] = kTwoPi * len[i] * s_edge / dth;
        }
    }
    const double rmax = g.spec().r_max;
    for (int j = 0; j < nt; ++j) rob_[j] = kTwoPi * rmax * ws[j];

    diag_.assign(g.size(), 0.0);
    for (int i = 0; i + 1 < nr; ++i)
        for (int j = 0; j < nt; ++j) {
            const double c = cR_[static_cast<std::size_t>(i) * nt + j];
            diag_[g.at(i, j)] += c;
            diag_[g.at(i + 1, j)] += c;
        }
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j + 1 < nt; ++j) {
            const double c = cT_[static_cast<std::size_t>(i) * (nt - 1) + j];
            diag_[g.at(i, j)] += c;
            diag_[g.at(i, j + 1)] += c;
        }
    for (int j = 0; j < nt; ++j) diag_[g.at(nr - 1, j)] += rob_[j];
}

void PsiStencil::apply(const double* x, double* y) const {
    const Grid& g = *grid_;
    const int nr = g.nr(), nt = g.ntheta();
    for (std::size_t k = 0; k < g.size(); ++k) y[k] = diag_[k] * x[k];
    for (int i = 0; i + 1 < nr; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nt;
        for (int j = 0; j < nt; ++j) {
            const double c = cR_[row + j];
            y[row + j] -= c * x[row + nt + j];
            y[row + nt + j] -= c * x[row + j];
        }
    }
    for (int i = 0; i < nr; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nt;
        const std::size_t crow = static_cast<std::size_t>(i) * (nt - 1);
        for (int j = 0; j + 1 < nt; ++j) {
            const double c = cT_[crow + j];
            y[row + j] -= c * x[row + j + 1];
            y[row + j + 1] -= c * x[row + j];
        }
    }
}

void PsiStencil::apply_shifted(const double* x, const double* d, double* y) const {
    apply(x, y);
    for (std::size_t k = 0; k < grid_->size(); ++k) y[k] += d[k] * x[k];
}

void PsiStencil::energy_split(const double* x, double* inside, double* outside) const {
    const Grid& g = *grid_;
    const int nr = g.nr(), nt = g.ntheta(), ib = g.ball_index();
    double ein = 0.0, eout = 0.0;
    for (int i = 0; i + 1 < nr; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nt;
        const bool in = (i + 1 <= ib);  // edge lies in [r_i, r_{i+1}] <= 1
        for (int j = 0; j < nt; ++j) {
            const double d = x[row + nt + j] - x[row + j];
            const double e = cR_[row + j] * d * d;
            (in ? ein : eout) += e;
        }
    }
    for (int i = 0; i < nr; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nt;
        const std::size_t crow = static_cast<std::size_t>(i) * (nt - 1);
        const double len = g.len_r()[i];
        const double frac_in = (len > 0.0) ? lenr_in_[i] / len : 0.0;
        for (int j = 0; j + 1 < nt; ++j) {
            const double d = x[row + j + 1] - x[row + j];
            const double e = cT_[crow + j] * d * d;
            ein += frac_in * e;
            eout += (1.0 - frac_in) * e;
        }
    }
    // Robin boundary term belongs to the outside part.
    for (int j = 0; j < nt; ++j) {
        const double v = x[g.at(nr - 1, j)];
        eout += rob_[j] * v * v;
    }
    *inside = ein;
    *outside = eout;
}

double PsiStencil::face_flux(const double* x, int i) const {
    const Grid& g = *grid_;
    const int nt = g.ntheta();
    double fl = 0.0;
    const std::size_t row = static_cast<std::size_t>(i) * nt;
    for (int j = 0; j < nt; ++j) fl += cR_[row + j] * (x[row + j] - x[row + nt + j]);
    return fl;
}

void PsiStencil::assemble_banded(BandedCholesky& B, const double* extra_diag) const {
    const Grid& g = *grid_;
    const int nr = g.nr(), nt = g.ntheta();
    if (B.n() != g.size() || B.bandwidth() != static_cast<std::size_t>(nt))
        B.reset(g.size(), nt);
    else
        B.clear();
    for (std::size_t k = 0; k < g.size(); ++k)
        B.entry(k, k) = diag_[k] + (extra_diag ? extra_diag[k] : 0.0);
    for (int i = 0; i < nr; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nt;
        const std::size_t crow = static_cast<std::size_t>(i) * (nt - 1);
        for (int j = 0; j + 1 < nt; ++j) B.entry(row + j + 1, row + j) = -cT_[crow + j];
    }
    for (int i = 0; i + 1 < nr; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nt;
        for (int j = 0; j < nt; ++j) B.entry(row + nt + j, row + j) = -cR_[row + j];
    }
}

GaugeStencil::GaugeStencil(const Grid& g) : grid_(&g) {
    const int nt = g.ntheta();
    i0_ = g.ball_index();
    nro_ = g.nr() - i0_;
    const auto& r = g.r_nodes();
    const auto& ws = g.w_sphere();
    const auto& q = g.invr2_r();

    sin_.resize(nt);
    for (int j = 0; j < nt; ++j) sin_[j] = std::sin(g.theta_nodes()[j]);

    gR_.assign(static_cast<std::size_t>(nro_ - 1) * nt, 0.0);
    gT_.assign(static_cast<std::size_t>(nro_) * (nt - 1), 0.0);
    gAx0_.assign(nro_, 0.0);
    gAxPi_.assign(nro_, 0.0);
    edge_r_lo_.assign(nro_ - 1, 0.0);
    edge_r_hi_.assign(nro_ - 1, 0.0);

    for (int I = 0; I + 1 < nro_; ++I) {
        const double h = r[i0_ + I + 1] - r[i0_ + I];
        for (int j = 0; j < nt; ++j)
            gR_[static_cast<std::size_t>(I) * nt + j] = kTwoPi * ws[j] / h;
        edge_r_lo_[I] = r[i0_ + I];
        edge_r_hi_[I] = r[i0_ + I + 1];
    }
    for (int I = 0; I < nro_; ++I) {
        const double qi = q[i0_ + I];
        for (int j = 0; j + 1 < nt; ++j) {
            // 1 / int_{cell edge span} sin dtheta  (variational two-point flux)
            const double m = std::cos(g.theta_nodes()[j]) - std::cos(g.theta_nodes()[j + 1]);
            gT_[static_cast<std::size_t>(I) * (nt - 1) + j] = kTwoPi * qi / m;
        }
        gAx0_[I] = kTwoPi * qi / (1.0 - std::cos(g.theta_nodes()[0]));
        gAxPi_[I] = kTwoPi * qi / (std::cos(g.theta_nodes()[nt - 1]) + 1.0);
    }

    diag_.assign(static_cast<std::size_t>(nro_) * nt, 0.0);
    for (int I = 0; I + 1 < nro_; ++I)
        for (int j = 0; j < nt; ++j) {
            const double c = gR_[static_cast<std::size_t>(I) * nt + j];
            diag_[static_cast<std::size_t>(I) * nt + j] += c;
            diag_[static_cast<std::size_t>(I + 1) * nt + j] += c;
        }
    for (int I = 0; I < nro_; ++I)
        for (int j = 0; j + 1 < nt; ++j) {
            const double c = gT_[static_cast<std::size_t>(I) * (nt - 1) + j];
            diag_[static_cast<std::size_t>(I) * nt + j] += c * sin_[j] * sin_[j];
            diag_[static_cast<std::size_t>(I) * nt + j + 1] += c * sin_[j + 1] * sin_[j + 1];
        }
    for (int I = 0; I < nro_; ++I) {
        diag_[static_cast<std::size_t>(I) * nt] += gAx0_[I] * sin_[0] * sin_[0];
        diag_[static_cast<std::size_t>(I) * nt + nt - 1] += gAxPi_[I] * sin_[nt - 1] * sin_[nt - 1];
    }
}

void GaugeStencil::apply(const double* a, double* y) const {
    const int nt = grid_->ntheta();
    const std::size_t n = static_cast<std::size_t>(nro_) * nt;
    for (std::size_t k = 0; k < n; ++k) y[k] = 0.0;

    for (int I = 0; I + 1 < nro_; ++I) {
        const std::size_t row = static_cast<std::size_t>(I) * nt;
        for (int j = 0; j < nt; ++j) {
            const double c = gR_[row + j];
            const double d = a[row + nt + j] - a[row + j];
            y[row + j] -= c * d;
            y[row + nt + j] += c * d;
        }
    }
    for (int I = 0; I < nro_; ++I) {
        const std::size_t row = static_cast<std::size_t>(I) * nt;
        const std::size_t crow = static_cast<std::size_t>(I) * (nt - 1);
        for (int j = 0; j + 1 < nt; ++j) {
            const double c = gT_[crow + j];
            const double du = sin_[j + 1] * a[row + j + 1] - sin_[j] * a[row + j];
            y[row + j] -= c * du * sin_[j];
            y[row + j + 1] += c * du * sin_[j + 1];
        }
        y[row] += gAx0_[I] * sin_[0] * sin_[0] * a[row];
        y[row + nt - 1] += gAxPi_[I] * sin_[nt - 1] * sin_[nt - 1] * a[row + nt - 1];
    }
}

double GaugeStencil::energy(const double* a) const {
    const int nt = grid_->ntheta();
    double e = 0.0;
    for (int I = 0; I + 1 < nro_; ++I) {
        const std::size_t row = static_cast<std::size_t>(I) * nt;
        for (int j = 0; j < nt; ++j) {
            const double d = a[row + nt + j] - a[row + j];
            e += gR_[row + j] * d * d;
        }
    }
    for (int I = 0; I < nro_; ++I) {
        const std::size_t row = static_cast<std::size_t>(I) * nt;
        const std::size_t crow = static_cast<std::size_t>(I) * (nt - 1);
        for (int j = 0; j + 1 < nt; ++j) {
            const double du = sin_[j + 1] * a[row + j + 1] - sin_[j] * a[row + j];
            e += gT_[crow + j] * du * du;
        }
        const double u0 = sin_[0] * a[row];
        const double u1 = sin_[nt - 1] * a[row + nt - 1];
        e += gAx0_[I] * u0 * u0 + gAxPi_[I] * u1 * u1;
    }
    return e;
}

double GaugeStencil::energy_in_shell(const double* a, double r_lo, double r_hi) const {
    const Grid& g = *grid_;
    const int nt = g.ntheta();
    double e = 0.0;
    // Radial edges: weight by the overlap fraction of [r_I, r_{I+1}] with the shell.
    for (int I = 0; I + 1 < nro_; ++I) {
        const double lo = edge_r_lo_[I], hi = edge_r_hi_[I];
        const double ov = std::max(0.0, std::min(hi, r_hi) - std::max(lo, r_lo));
        if (ov <= 0.0) continue;
        const double frac = ov / (hi - lo);
        const std::size_t row = static_cast<std::size_t>(I) * nt;
        for (int j = 0; j < nt; ++j) {
            const double d = a[row + nt + j] - a[row + j];
            e += frac * gR_[row + j] * d * d;
        }
    }
    // Angular edges: weight by overlap of the node's control cell.
    for (int I = 0; I < nro_; ++I) {
        const int i = i0_ + I;
        const double lo = std::max(g.r_faces()[i], 1.0), hi = g.r_faces()[i + 1];
        const double ov = std::max(0.0, std::min(hi, r_hi) - std::max(lo, r_lo));
        if (ov <= 0.0 || hi <= lo) continue;
        const double frac = ov / (hi - lo);
        const std::size_t row = static_cast<std::size_t>(I) * nt;
        const std::size_t crow = static_cast<std::size_t>(I) * (nt - 1);
        for (int j = 0; j + 1 < nt; ++j) {
            const double du = sin_[j + 1] * a[row + j + 1] - sin_[j] * a[row + j];
            e += frac * gT_[crow + j] * du * du;
        }
        const double u0 = sin_[0] * a[row];
        const double u1 = sin_[nt - 1] * a[row + nt - 1];
        e += frac * (gAx0_[I] * u0 * u0 + gAxPi_[I] * u1 * u1);
    }
    return e;
}

Field laplacian_axi(const Field& f, const Grid& g, const PsiStencil& st) {
    Field out(g, Support::WholeDomain);
    std::vector<double> y(g.size());
    st.apply(f.v.data(), y.data());
    const auto& w = g.w_vol();
    for (std::size_t k = 0; k < g.size(); ++k) out.v[k] = -y[k] / w[k];
    return out;
}

Field laplacian_axi(const Field& f, const Grid& g) {
    PsiStencil st(g);
    return laplacian_axi(f, g, st);
}

Field gauge_operator(const Field& alpha, const Grid& g, const GaugeStencil& st) {
    if (alpha.support != Support::OutsideBall)
        throw std::invalid_argument("gauge_operator: field must be OutsideBall");
    const int nt = g.ntheta(), i0 = g.ball_index(), nro = st.nro();
    std::vector<double> a(static_cast<std::size_t>(nro) * nt), y(a.size());
    for (int I = 0; I < nro; ++I)
        for (int j = 0; j < nt; ++j)
            a[static_cast<std::size_t>(I) * nt + j] = alpha.v[g.at(i0 + I, j)];
    st.apply(a.data(), y.data());
    Field out(g, Support::WholeDomain);
    const double two_pi = 2.0 * M_PI;
    for (int I = 0; I < nro; ++I)
        for (int j = 0; j < nt; ++j) {
            const double w = two_pi * g.len_r()[i0 + I] * g.w_sphere()[j];
            out.v[g.at(i0 + I, j)] = y[static_cast<std::size_t>(I) * nt + j] / w;
        }
    return out;
}

Field gauge_operator(const Field& alpha, const Grid& g) {
    GaugeStencil st(g);
    return gauge_operator(alpha, g, st);
}

double integrate(const Grid& g, const Field& f) {
    double s = 0.0;
    const auto& w = g.w_vol();
    for (std::size_t k = 0; k < g.size(); ++k) s += w[k] * f.v[k];
    return s;
}

}  // namespace su2stat
