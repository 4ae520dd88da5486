#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace su2stat {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
    double last_residual = -1.0;
};

/// Discretization parameters. Radii are in units of the charge-ball radius.
struct GridSpec {
    double r_max = 128.0;  // outer radius, >= 16
    int n_r_in = 32;       // radial cells in [0,1]
    int n_r_out = 256;     // radial cells in [1, r_max], uniform in ln r
    int n_theta = 48;      // polar cells in [0, pi]

    void validate() const;
    GridSpec refined() const;  // one refinement step (finer and larger domain)
};

/// Axisymmetric (r, theta) tensor grid with cell-exact quadrature weights.
///
/// Radial nodes: uniform in r on [0,1], uniform in s = ln r on [1, r_max];
/// r = 1 is shared exactly. Theta nodes are cell centers (j+1/2)*pi/n_theta,
/// so the axis is never sampled. Volume weights come from exact integrals of
/// r^2 dr and sin(theta) dtheta over control cells; the sum of w_vol_in over
/// all nodes is exactly 4*pi/3.
class Grid {
  public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int nr() const { return static_cast<int>(r_.size()); }
    int ntheta() const { return static_cast<int>(theta_.size()); }
    int ball_index() const { return spec_.n_r_in; }  // radial index of r = 1
    std::size_t size() const { return r_.size() * theta_.size(); }
    std::size_t at(int i, int j) const {
        return static_cast<std::size_t>(i) * theta_.size() + static_cast<std::size_t>(j);
    }

    const std::vector<double>& r_nodes() const { return r_; }
    const std::vector<double>& theta_nodes() const { return theta_; }

    // faces[i] is the control-volume boundary between nodes i-1 and i;
    // faces[0] = 0 and faces[nr] = r_max.
    const std::vector<double>& r_faces() const { return faces_; }

    // Exact per-cell integrals:
    //   vol_r[i]    = int r^2 dr over the control cell of node i
    //   vol_r_in[i] = same integral restricted to r <= 1
    //   len_r[i]    = int dr over the control cell
    //   invr2_r[i]  = int r^-2 dr over (control cell intersect r >= 1); 0 if inside
    const std::vector<double>& vol_r() const { return vol_r_; }
    const std::vector<double>& vol_r_in() const { return vol_r_in_; }
    const std::vector<double>& len_r() const { return len_r_; }
    const std::vector<double>& invr2_r() const { return invr2_r_; }

    // w_sphere[j] = int sin(theta) dtheta over theta cell j; sums to 2 exactly.
    const std::vector<double>& w_sphere() const { return w_sphere_; }

    // Full 3D volume weights (2*pi from phi included), per node.
    const std::vector<double>& w_vol() const { return w_vol_; }
    // Portion of w_vol inside the unit ball; sums to 4*pi/3 exactly.
    const std::vector<double>& w_vol_in() const { return w_vol_in_; }

    double dtheta() const { return dtheta_; }
    double ds_out() const { return ds_out_; }  // ln-r spacing outside the ball
    double h_in() const { return 1.0 / spec_.n_r_in; }
    // Nominal resolution parameter used for O(h^2) tolerances.
    double h_nominal() const;

  private:
    GridSpec spec_;
    std::vector<double> r_, theta_, faces_;
    std::vector<double> vol_r_, vol_r_in_, len_r_, invr2_r_;
    std::vector<double> w_sphere_, w_vol_, w_vol_in_;
    double dtheta_ = 0.0, ds_out_ = 0.0;
};

/// Scalar field on a Grid, stored row-major (r-major). Fields flagged
/// OutsideBall are identically zero at all nodes with r <= 1.
enum class Support { WholeDomain, OutsideBall };

struct Field {
    std::vector<double> v;
    Support support = Support::WholeDomain;

    Field() = default;
    Field(const Grid& g, Support s) : v(g.size(), 0.0), support(s) {}

    double& operator[](std::size_t k) { return v[k]; }
    double operator[](std::size_t k) const { return v[k]; }
    std::size_t size() const { return v.size(); }
};

/// Zeroes all nodes with r <= 1 and tags the field OutsideBall.
void enforce_outside_ball(const Grid& g, Field& f);

/// Max |f| over nodes with r <= 1 (consistency check for OutsideBall fields).
double max_abs_inside_ball(const Grid& g, const Field& f);

}  // namespace su2stat
