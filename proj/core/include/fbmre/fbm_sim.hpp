#pragma once

#include <vector>

#include "fbmre/gram.hpp"
#include "fbmre/rng.hpp"

namespace fbmre {

/// Values of one fBm trajectory at the grid times. W(0) = 0 is implicit.
struct FbmPath {
    SamplingGrid grid;
    std::vector<double> values;
};

/// Exact draw from N(0, V(H)) as L z. Works on any grid.
FbmPath sample_fbm_exact(const SamplingGrid& grid, Hurst h, RngStream& rng);

/// Same as above against an already factorized Gram matrix; use this inside
/// replication loops so V(H) is factorized once.
FbmPath sample_fbm_exact(const GramMatrix& gram, RngStream& rng);

/// Davies-Harte circulant-embedding sampler for the uniform grid t_j = jT/n.
///
/// Fractional Gaussian noise with unit spacing is generated from a 2n-point
/// circulant embedding of its autocovariance, cumulatively summed into an
/// fBm path on [0, 1] and rescaled by T^H (self-similarity). Eigenvalues are
/// computed once at construction; `sample` only needs one FFT.
class CirculantFbmSampler {
public:
    /// Throws NegativeEigenvalueError when the embedding has an eigenvalue
    /// below -1e-10 times the largest; smaller negatives are set to zero.
    CirculantFbmSampler(std::size_t n, double horizon, Hurst h);

    const SamplingGrid& grid() const noexcept { return grid_; }

    /// Thread-safe: no mutable state is touched.
    FbmPath sample(RngStream& rng) const;

private:
    SamplingGrid grid_;
    Hurst h_;
    std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / 2n)
    double scale_;                    // (T / n)^H
};

FbmPath sample_fbm_fast(std::size_t n, double horizon, Hurst h, RngStream& rng);

/// Autocovariance of unit-spacing fractional Gaussian noise at lag k.
double fgn_autocovariance(std::size_t k, double h) noexcept;

}  // namespace fbmre
