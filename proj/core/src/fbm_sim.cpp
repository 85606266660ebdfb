#include "fbmre/fbm_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "fbmre/errors.hpp"

namespace fbmre {

double fgn_autocovariance(std::size_t k, double h) noexcept {
    const double two_h = 2.0 * h;
    const double kd = static_cast<double>(k);
    return 0.5 * (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) +
                  std::pow(std::abs(kd - 1.0), two_h));
}

FbmPath sample_fbm_exact(const GramMatrix& gram, RngStream& rng) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(gram.size()));
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = rng.normal();
    const Eigen::VectorXd w = gram.color(z);
    return FbmPath{gram.grid(), std::vector<double>(w.data(), w.data() + w.size())};
}

FbmPath sample_fbm_exact(const SamplingGrid& grid, Hurst h, RngStream& rng) {
    return sample_fbm_exact(build_gram(grid, h), rng);
}

CirculantFbmSampler::CirculantFbmSampler(std::size_t n, double horizon, Hurst h)
    : grid_(SamplingGrid::uniform(n, horizon)),
      h_(h),
      scale_(std::pow(horizon / static_cast<double>(n), h.value())) {
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(k, h.value());
    for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> eig;
    fft.fwd(eig, row);

    double largest = 0.0;
    for (const auto& e : eig) largest = std::max(largest, e.real());
    sqrt_eigen_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lambda = eig[k].real();
        if (lambda < 0.0) {
            if (lambda < -1e-10 * largest) {
                std::ostringstream msg;
                msg << "circulant embedding has negative eigenvalue " << lambda << " for n=" << n
                    << ", H=" << h.value();
                throw NegativeEigenvalueError(msg.str());
            }
            lambda = 0.0;
        }
        sqrt_eigen_[k] = std::sqrt(lambda / static_cast<double>(m));
    }
}

FbmPath CirculantFbmSampler::sample(RngStream& rng) const {
    const std::size_t m = sqrt_eigen_.size();
    const std::size_t n = m / 2;
    std::vector<std::complex<double>> w(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        w[k] = sqrt_eigen_[k] * std::complex<double>(re, im);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out;
    fft.fwd(out, w);

    std::vector<double> path(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += out[j].real();
        path[j] = scale_ * acc;
    }
    return FbmPath{grid_, std::move(path)};
}

FbmPath sample_fbm_fast(std::size_t n, double horizon, Hurst h, RngStream& rng) {
    return CirculantFbmSampler(n, horizon, h).sample(rng);
}

}  // namespace fbmre
