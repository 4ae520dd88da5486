#include "grid.hpp"

#include <algorithm>
#include <cmath>

namespace su2stat {

void GridSpec::validate() const {
    if (!(r_max >= 16.0))
        throw ConfigError("GridSpec: r_max must be >= 16 (got " + std::to_string(r_max) + ")");
    if (n_r_in < 8 || n_r_out < 8 || n_theta < 8)
        throw ConfigError("GridSpec: n_r_in, n_r_out, n_theta must all be >= 8");
}

GridSpec GridSpec::refined() const {
    GridSpec f;
    f.r_max = 2.0 * r_max;
    f.n_r_in = n_r_in + n_r_in / 2;
    f.n_r_out = n_r_out + n_r_out / 2;
    f.n_theta = n_theta + n_theta / 2;
    return f;
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    spec_.validate();

    const int ni = spec_.n_r_in, no = spec_.n_r_out, nt = spec_.n_theta;
    const int nr = ni + no + 1;

    r_.resize(nr);
    const double h = 1.0 / ni;
    for (int i = 0; i <= ni; ++i) r_[i] = i * h;
    r_[ni] = 1.0;  // exact
    ds_out_ = std::log(spec_.r_max) / no;
    for (int k = 1; k <= no; ++k) r_[ni + k] = std::exp(k * ds_out_);
    r_[nr - 1] = spec_.r_max;  // exact

    for (int i = 1; i < nr; ++i)
        if (!(r_[i] > r_[i - 1]))
            throw ConfigError("GridSpec produces non-monotone radii");

    faces_.resize(nr + 1);
    faces_[0] = 0.0;
    for (int i = 1; i < nr; ++i) faces_[i] = 0.5 * (r_[i - 1] + r_[i]);
    faces_[nr] = spec_.r_max;

    vol_r_.resize(nr);
    vol_r_in_.resize(nr);
    len_r_.resize(nr);
    invr2_r_.resize(nr);
    for (int i = 0; i < nr; ++i) {
        const double a = faces_[i], b = faces_[i + 1];
        vol_r_[i] = (b * b * b - a * a * a) / 3.0;
        const double bi = std::min(b, 1.0), ai = std::min(a, 1.0);
        vol_r_in_[i] = (bi * bi * bi - ai * ai * ai) / 3.0;
        len_r_[i] = b - a;
        const double ao = std::max(a, 1.0), bo = std::max(b, 1.0);
        invr2_r_[i] = (bo > ao) ? (1.0 / ao - 1.0 / bo) : 0.0;
    }

    theta_.resize(nt);
    dtheta_ = M_PI / nt;
    w_sphere_.resize(nt);
    for (int j = 0; j < nt; ++j) {
        theta_[j] = (j + 0.5) * dtheta_;
        w_sphere_[j] = std::cos(j * dtheta_) - std::cos((j + 1) * dtheta_);
    }

    w_vol_.resize(size());
    w_vol_in_.resize(size());
    const double two_pi = 2.0 * M_PI;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) {
            w_vol_[at(i, j)] = two_pi * vol_r_[i] * w_sphere_[j];
            w_vol_in_[at(i, j)] = two_pi * vol_r_in_[i] * w_sphere_[j];
        }
}

double Grid::h_nominal() const {
    return std::max({h_in(), ds_out_, dtheta_});
}

void enforce_outside_ball(const Grid& g, Field& f) {
    const int ib = g.ball_index();
    for (int i = 0; i <= ib; ++i)
        for (int j = 0; j < g.ntheta(); ++j) f.v[g.at(i, j)] = 0.0;
    f.support = Support::OutsideBall;
}

double max_abs_inside_ball(const Grid& g, const Field& f) {
    double m = 0.0;
    const int ib = g.ball_index();
    for (int i = 0; i <= ib; ++i)
        for (int j = 0; j < g.ntheta(); ++j)
            m = std::max(m, std::abs(f.v[g.at(i, j)]));
    return m;
}

}  // namespace su2stat
