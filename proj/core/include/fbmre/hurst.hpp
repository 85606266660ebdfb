#pragma once

#include <span>
#include <vector>

namespace fbmre {

/// Filter gamma = (gamma_0..gamma_l) with certified order p >= 2, i.e.
/// sum_j j^r gamma_j = 0 for r < p and != 0 for r = p (0^0 = 1).
class VariationFilter {
public:
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    /// l, the filter length minus one.
    std::size_t lag() const noexcept { return coeffs_.size() - 1; }
    int order() const noexcept { return order_; }

    bool operator==(const VariationFilter&) const = default;

private:
    friend VariationFilter validate_filter(std::vector<double> coeffs);
    VariationFilter(std::vector<double> coeffs, int order)
        : coeffs_(std::move(coeffs)), order_(order) {}

    std::vector<double> coeffs_;
    int order_;
};

/// Certifies the order of `coeffs`; throws OrderTooLowError when p < 2.
VariationFilter validate_filter(std::vector<double> coeffs);

/// Order of an arbitrary coefficient vector (no p >= 2 requirement).
int filter_order(std::span<const double> coeffs);

/// (1, -2, 1).
VariationFilter diff2_filter();
/// (-1, 3, -3, 1).
VariationFilter diff3_filter();

struct HurstEstimate {
    double h_hat;
    double k;
    VariationFilter filter;
    std::size_t n;
    /// sqrt(A(h_hat, k, gamma)) / (k sqrt(n) log n).
    double asym_std;
};

/// pi_t(j) = -1/2 sum_{q,r} gamma_q gamma_r |q - r + j|^{2t}: the
/// autocovariance at lag j of the filtered unit-spacing fBm with index t.
/// Large lags use a binomial expansion to avoid cancellation.
double pi_gamma(double t, long j, const VariationFilter& f);

/// rho_t(i) = pi_t(i) / pi_t(0), the autocorrelation of the filtered series.
double rho_gamma(double t, long i, const VariationFilter& f);

/// E|Z|^k for Z ~ N(0, 1): 2^{k/2} Gamma((k + 1)/2) / Gamma(1/2).
double e_k(double k);

/// Mean of |sum_q gamma_q z_{i-q}|^k over the windows i = l..len-2 of a
/// series z_0..z_{len-1} that includes the origin. The last point is unused.
double k_variation(std::span<const double> z, double k, const VariationFilter& f);

/// Mean of |sum_q gamma_q Y((i - q)/n)|^k over the windows i = l..n-1, with
/// Y(0) = 0 prepended to `y`. The last observation is unused.
double s_n(std::span<const double> y, double k, const VariationFilter& f);

/// Expected k-variation of fBm with index t sampled at spacing `delta`:
/// delta^{tk} pi_t(0)^{k/2} E_k.
double g_delta(double t, double delta, double k, const VariationFilter& f);

/// g_{n,k,gamma}(t) = n^{-tk} pi_t(0)^{k/2} E_k (unit horizon).
double g_scale(double t, std::size_t n, double k, const VariationFilter& f);

/// Hurst estimate from one trajectory on the uniform grid t_j = jT/n.
///
/// Solves g_delta(t) = s_n(y) for t on [0.01, 0.99] by bisection
/// (tolerance 1e-10, at most 200 steps). The linear drift t phi is
/// annihilated by the filter, so the random effect never enters.
HurstEstimate estimate_h(std::span<const double> y, double horizon, double k,
                         const VariationFilter& f);

/// A(t, k, gamma) = sum_{j>=1} (c^k_{2j})^2 (2j)! sum_{i in Z} rho_t(i)^{2j}.
double asym_variance_A(double t, double k, const VariationFilter& f);

}  // namespace fbmre
