#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace fbmre {

/// Hurst index H, strictly inside (0, 1).
class Hurst {
public:
    explicit Hurst(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Strictly increasing observation times t_1 < ... < t_n = T with t_1 > 0.
/// The implicit origin t_0 = 0 is not stored.
class SamplingGrid {
public:
    explicit SamplingGrid(std::vector<double> times);

    /// t_j = j T / n, j = 1..n.
    static SamplingGrid uniform(std::size_t n, double horizon);

    std::size_t size() const noexcept { return times_.size(); }
    double horizon() const noexcept { return times_.back(); }
    double operator[](std::size_t j) const noexcept { return times_[j]; }
    std::span<const double> times() const noexcept { return times_; }

    /// True when every spacing, including t_1 - 0, equals T/n within `rel_tol`.
    bool is_uniform(double rel_tol = 1e-9) const noexcept;

    bool operator==(const SamplingGrid&) const = default;

private:
    std::vector<double> times_;
};

/// Covariance of fBm at the grid times together with its Cholesky factor.
///
/// Immutable after construction; all quadratic forms go through triangular
/// solves against the stored factor.
class GramMatrix {
public:
    /// Admissible Hurst range for factorization. Outside it V is too close
    /// to singular (rank one as H -> 1).
    static constexpr double kMinHurst = 0.01;
    static constexpr double kMaxHurst = 0.99;

    GramMatrix(SamplingGrid grid, Hurst h);

    const SamplingGrid& grid() const noexcept { return grid_; }
    Hurst hurst() const noexcept { return h_; }
    std::size_t size() const noexcept { return grid_.size(); }

    const Eigen::MatrixXd& matrix() const noexcept { return v_; }
    /// Lower-triangular L with L L' = V.
    Eigen::MatrixXd factor() const { return llt_.matrixL(); }

    /// u' V^{-1} u, u the vector of observation times.
    double quad_form_uu() const noexcept { return quu_; }
    /// u' V^{-1} y.
    double quad_form_uy(std::span<const double> y) const;
    /// y' V^{-1} y.
    double quad_form_yy(std::span<const double> y) const;

    double log_det() const noexcept { return log_det_; }

    /// L^{-1} y.
    Eigen::VectorXd whiten(std::span<const double> y) const;
    /// L z, i.e. a N(0, V) draw when z is standard normal.
    Eigen::VectorXd color(const Eigen::VectorXd& z) const;

private:
    SamplingGrid grid_;
    Hurst h_;
    Eigen::MatrixXd v_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd whitened_u_;
    double quu_ = 0.0;
    double log_det_ = 0.0;
};

/// Cov(W^H(s), W^H(t)) = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double s, double t, double h) noexcept;

GramMatrix build_gram(const SamplingGrid& grid, Hurst h);

}  // namespace fbmre
