#pragma once

#include <cstddef>
#include <vector>

namespace su2stat {

/// Symmetric positive-definite banded Cholesky (lower storage, LAPACK-style
/// packing): band[j*(bw+1) + d] holds A(j+d, j) for d = 0..bw. Factor and
/// solve in place; used as the direct path for the screened-Poisson systems,
/// whose (r-major, theta-minor) ordering has bandwidth n_theta.
class BandedCholesky {
  public:
    BandedCholesky() = default;
    BandedCholesky(std::size_t n, std::size_t bw) { reset(n, bw); }

    void reset(std::size_t n, std::size_t bw);
    std::size_t n() const { return n_; }
    std::size_t bandwidth() const { return bw_; }

    double& entry(std::size_t row, std::size_t col) { return band_[col * (bw_ + 1) + (row - col)]; }
    void clear();

    /// In-place Cholesky of the packed band. Returns false if a pivot is not
    /// positive (matrix not SPD to rounding).
    bool factor();

    /// Solves L L^T x = b (factor() must have succeeded).
    void solve(const double* b, double* x) const;

  private:
    std::size_t n_ = 0, bw_ = 0;
    std::vector<double> band_;
    bool factored_ = false;
};

}  // namespace su2stat
