#include "fbmre/gram.hpp"

#include <cmath>
#include <sstream>

#include "fbmre/errors.hpp"

namespace fbmre {

Hurst::Hurst(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        std::ostringstream msg;
        msg << "Hurst index must lie in (0, 1), got " << value;
        throw RangeError(msg.str());
    }
}

SamplingGrid::SamplingGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty()) throw DimensionError("sampling grid needs at least one time");
    if (!(times_.front() > 0.0) || !std::isfinite(times_.front()))
        throw RangeError("first observation time must be positive and finite");
    for (std::size_t j = 1; j < times_.size(); ++j) {
        if (!(times_[j] > times_[j - 1]) || !std::isfinite(times_[j])) {
            std::ostringstream msg;
            msg << "observation times must be strictly increasing (index " << j << ")";
            throw RangeError(msg.str());
        }
    }
}

SamplingGrid SamplingGrid::uniform(std::size_t n, double horizon) {
    if (n == 0) throw DimensionError("uniform grid needs n >= 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw RangeError("horizon must be positive");
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j)
        t[j] = static_cast<double>(j + 1) * horizon / static_cast<double>(n);
    t.back() = horizon;
    return SamplingGrid(std::move(t));
}

bool SamplingGrid::is_uniform(double rel_tol) const noexcept {
    const double step = horizon() / static_cast<double>(size());
    double prev = 0.0;
    for (double t : times_) {
        if (std::abs((t - prev) - step) > rel_tol * step) return false;
        prev = t;
    }
    return true;
}

double fbm_covariance(double s, double t, double h) noexcept {
    const double two_h = 2.0 * h;
    return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

GramMatrix::GramMatrix(SamplingGrid grid, Hurst h) : grid_(std::move(grid)), h_(h) {
    const double hv = h.value();
    if (hv < kMinHurst || hv > kMaxHurst) {
        std::ostringstream msg;
        msg << "Hurst index " << hv << " outside the supported range [" << kMinHurst << ", "
            << kMaxHurst << "]";
        throw RangeError(msg.str());
    }
    const auto n = static_cast<Eigen::Index>(grid_.size());
    v_.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        v_(k, k) = std::pow(grid_[k], 2.0 * hv);
        for (Eigen::Index l = 0; l < k; ++l) {
            const double c = fbm_covariance(grid_[k], grid_[l], hv);
            v_(k, l) = c;
            v_(l, k) = c;
        }
    }
    llt_.compute(v_);
    if (llt_.info() != Eigen::Success)
        throw FactorizationError("fBm covariance matrix is numerically indefinite "
                                 "(duplicate times or extreme H)");
    const auto& lower = llt_.matrixLLT();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double d = lower(k, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw FactorizationError("Cholesky factor has a nonpositive pivot");
        log_det_ += 2.0 * std::log(d);
    }
    whitened_u_ = whiten(grid_.times());
    quu_ = whitened_u_.squaredNorm();
}

Eigen::VectorXd GramMatrix::whiten(std::span<const double> y) const {
    if (y.size() != grid_.size()) {
        std::ostringstream msg;
        msg << "vector of length " << y.size() << " does not match grid of length "
            << grid_.size();
        throw DimensionError(msg.str());
    }
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    llt_.matrixL().solveInPlace(w);
    return w;
}

double GramMatrix::quad_form_uy(std::span<const double> y) const {
    return whitened_u_.dot(whiten(y));
}

double GramMatrix::quad_form_yy(std::span<const double> y) const {
    return whiten(y).squaredNorm();
}

Eigen::VectorXd GramMatrix::color(const Eigen::VectorXd& z) const {
    if (static_cast<std::size_t>(z.size()) != grid_.size())
        throw DimensionError("standard normal vector does not match grid length");
    return llt_.matrixL() * z;
}

GramMatrix build_gram(const SamplingGrid& grid, Hurst h) { return GramMatrix(grid, h); }

}  // namespace fbmre
