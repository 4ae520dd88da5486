#include "banded.hpp"

#include <algorithm>
#include <cmath>

namespace su2stat {

void BandedCholesky::reset(std::size_t n, std::size_t bw) {
    n_ = n;
    bw_ = bw;
    band_.assign(n * (bw + 1), 0.0);
    factored_ = false;
}

void BandedCholesky::clear() {
    std::fill(band_.begin(), band_.end(), 0.0);
    factored_ = false;
}

bool BandedCholesky::factor() {
    const std::size_t w = bw_ + 1;
    for (std::size_t j = 0; j < n_; ++j) {
        double* colj = &band_[j * w];
        const double d = colj[0];
        if (!(d > 0.0)) return false;
        const double s = std::sqrt(d);
        colj[0] = s;
        const std::size_t m = std::min(bw_, n_ - 1 - j);
        const double inv_s = 1.0 / s;
        for (std::size_t d1 = 1; d1 <= m; ++d1) colj[d1] *= inv_s;
        // rank-1 update of the trailing triangle within the band
        for (std::size_t k = 1; k <= m; ++k) {
            const double ljk = colj[k];
            if (ljk == 0.0) continue;
            double* colk = &band_[(j + k) * w];
            for (std::size_t d2 = k; d2 <= m; ++d2) colk[d2 - k] -= colj[d2] * ljk;
        }
    }
    factored_ = true;
    return true;
}

void BandedCholesky::solve(const double* b, double* x) const {
    const std::size_t w = bw_ + 1;
    // forward: L y = b
    for (std::size_t j = 0; j < n_; ++j) x[j] = b[j];
    for (std::size_t j = 0; j < n_; ++j) {
        const double* colj = &band_[j * w];
        const double y = x[j] / colj[0];
        x[j] = y;
        const std::size_t m = std::min(bw_, n_ - 1 - j);
        for (std::size_t d = 1; d <= m; ++d) x[j + d] -= colj[d] * y;
    }
    // backward: L^T x = y
    for (std::size_t jj = n_; jj-- > 0;) {
        const double* colj = &band_[jj * w];
        const std::size_t m = std::min(bw_, n_ - 1 - jj);
        double s = x[jj];
        for (std::size_t d = 1; d <= m; ++d) s -= colj[d] * x[jj + d];
        x[jj] = s / colj[0];
    }
}

}  // namespace su2stat
