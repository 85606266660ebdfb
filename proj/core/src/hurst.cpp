#include "fbmre/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fbmre/errors.hpp"

namespace fbmre {

namespace {

constexpr double kSearchLo = 0.01;
constexpr double kSearchHi = 0.99;
constexpr double kBisectTol = 1e-10;
constexpr int kBisectMaxIter = 200;

constexpr double kRhoCutoff = 1e-12;
constexpr long kRhoMaxLag = 100000;
constexpr double kSeriesRelTol = 1e-14;
constexpr int kSeriesMaxTerms = 50;

// c_m = sum_{q - r = m} gamma_q gamma_r for m = -l..l, stored at index m + l.
std::vector<double> autocorrelation(const std::vector<double>& g) {
    const long l = static_cast<long>(g.size()) - 1;
    std::vector<double> c(static_cast<std::size_t>(2 * l + 1), 0.0);
    for (long q = 0; q <= l; ++q)
        for (long r = 0; r <= l; ++r) c[static_cast<std::size_t>(q - r + l)] += g[q] * g[r];
    return c;
}

double pi_direct(double t, long j, const std::vector<double>& c, long l) {
    double acc = 0.0;
    for (long m = -l; m <= l; ++m) {
        const double d = std::abs(static_cast<double>(m + j));
        if (d > 0.0) acc += c[static_cast<std::size_t>(m + l)] * std::pow(d, 2.0 * t);
    }
    return -0.5 * acc;
}

// |m + j|^{2t} = j^{2t} sum_s binom(2t, s) (m/j)^s for j > l. The moments
// sum_m c_m m^s vanish for s < 2p and for odd s.
double pi_series(double t, long j, const std::vector<double>& c, long l) {
    const double jd = static_cast<double>(j);
    const double a = 2.0 * t;
    double binom = 1.0;  // binom(a, s)
    double inv_pow = 1.0;  // j^{-s}
    double acc = 0.0;
    for (int s = 1; s <= 80; ++s) {
        binom *= (a - (s - 1)) / s;
        inv_pow /= jd;
        if (s % 2 != 0) continue;
        double moment = 0.0;
        for (long m = -l; m <= l; ++m)
            moment += c[static_cast<std::size_t>(m + l)] * std::pow(static_cast<double>(m), s);
        const double term = binom * moment * inv_pow;
        acc += term;
        if (moment != 0.0 && std::abs(term) <= 1e-18 * std::abs(acc)) break;
    }
    return -0.5 * std::pow(jd, a) * acc;
}

double log_g_delta(double t, double log_delta, double k, const VariationFilter& f) {
    const double p0 = pi_gamma(t, 0, f);
    if (!(p0 > 0.0)) {
        std::ostringstream msg;
        msg << "pi_t(0) = " << p0 << " is not positive at t = " << t << "; invalid filter";
        throw DomainError(msg.str());
    }
    return t * k * log_delta + 0.5 * k * std::log(p0) + std::log(e_k(k));
}

}  // namespace

int filter_order(std::span<const double> coeffs) {
    const std::size_t len = coeffs.size();
    for (std::size_t r = 0; r < len; ++r) {
        double moment = 0.0;
        double scale = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            const double w = (r == 0) ? 1.0 : std::pow(static_cast<double>(j), static_cast<double>(r));
            moment += w * coeffs[j];
            scale += std::abs(w * coeffs[j]);
        }
        if (std::abs(moment) > 1e-12 * scale) return static_cast<int>(r);
    }
    // Only the zero vector reaches this point (Vandermonde argument).
    return static_cast<int>(len);
}

VariationFilter validate_filter(std::vector<double> coeffs) {
    if (coeffs.size() < 2) throw OrderTooLowError("filter needs at least two coefficients");
    bool any_nonzero = false;
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw DomainError("filter coefficients must be finite");
        any_nonzero = any_nonzero || c != 0.0;
    }
    if (!any_nonzero) throw OrderTooLowError("filter coefficients are all zero");
    const int p = filter_order(coeffs);
    if (p < 2) {
        std::ostringstream msg;
        msg << "filter has order " << p << "; order >= 2 is required to remove a linear drift";
        throw OrderTooLowError(msg.str());
    }
    return VariationFilter(std::move(coeffs), p);
}

VariationFilter diff2_filter() { return validate_filter({1.0, -2.0, 1.0}); }
VariationFilter diff3_filter() { return validate_filter({-1.0, 3.0, -3.0, 1.0}); }

double pi_gamma(double t, long j, const VariationFilter& f) {
    const long l = static_cast<long>(f.lag());
    const auto c = autocorrelation(f.coeffs());
    const long aj = std::abs(j);
    if (aj >= std::max<long>(16, 8 * l)) return pi_series(t, aj, c, l);
    return pi_direct(t, aj, c, l);
}

double rho_gamma(double t, long i, const VariationFilter& f) {
    return pi_gamma(t, i, f) / pi_gamma(t, 0, f);
}

double e_k(double k) {
    return std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * (k + 1.0)) / std::sqrt(std::numbers::pi);
}

double k_variation(std::span<const double> z, double k, const VariationFilter& f) {
    const std::size_t l = f.lag();
    if (z.size() < l + 2) {
        std::ostringstream msg;
        msg << "series of " << z.size() << " points (origin included) is too short for a filter of lag "
            << l;
        throw SeriesTooShortError(msg.str());
    }
    const auto& g = f.coeffs();
    const std::size_t windows = z.size() - 1 - l;
    double acc = 0.0;
    for (std::size_t i = l; i + 1 < z.size(); ++i) {
        double v = 0.0;
        for (std::size_t q = 0; q <= l; ++q) v += g[q] * z[i - q];
        acc += (k == 2.0) ? v * v : std::pow(std::abs(v), k);
    }
    return acc / static_cast<double>(windows);
}

double s_n(std::span<const double> y, double k, const VariationFilter& f) {
    std::vector<double> z(y.size() + 1);
    z[0] = 0.0;
    std::copy(y.begin(), y.end(), z.begin() + 1);
    return k_variation(z, k, f);
}

double g_delta(double t, double delta, double k, const VariationFilter& f) {
    return std::exp(log_g_delta(t, std::log(delta), k, f));
}

double g_scale(double t, std::size_t n, double k, const VariationFilter& f) {
    return g_delta(t, 1.0 / static_cast<double>(n), k, f);
}

HurstEstimate estimate_h(std::span<const double> y, double horizon, double k,
                         const VariationFilter& f) {
    if (!(k > 0.0)) throw RangeError("k must be positive");
    if (!(horizon > 0.0)) throw RangeError("horizon must be positive");
    const std::size_t n = y.size();
    const double s = s_n(y, k, f);
    const double log_delta = std::log(horizon / static_cast<double>(n));

    const double lg_lo = log_g_delta(kSearchLo, log_delta, k, f);
    const double lg_mid = log_g_delta(0.5 * (kSearchLo + kSearchHi), log_delta, k, f);
    const double lg_hi = log_g_delta(kSearchHi, log_delta, k, f);
    const bool decreasing = lg_lo > lg_mid && lg_mid > lg_hi;
    const bool increasing = lg_lo < lg_mid && lg_mid < lg_hi;
    if (!decreasing && !increasing)
        throw DomainError("scale function is not monotone on [0.01, 0.99] for this grid");

    if (!(s > 0.0) || !std::isfinite(s)) {
        std::ostringstream msg;
        msg << "k-variation " << s << " is not positive; series is inconsistent with fBm scaling";
        throw OutOfRangeError(msg.str());
    }
    const double target = std::log(s);
    if (target > std::max(lg_lo, lg_hi) || target < std::min(lg_lo, lg_hi)) {
        std::ostringstream msg;
        msg << "k-variation " << s << " lies outside [g(0.99), g(0.01)] = ["
            << std::exp(std::min(lg_lo, lg_hi)) << ", " << std::exp(std::max(lg_lo, lg_hi)) << "]";
        throw OutOfRangeError(msg.str());
    }

    double lo = kSearchLo;
    double hi = kSearchHi;
    for (int it = 0; it < kBisectMaxIter && hi - lo > kBisectTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double lg = log_g_delta(mid, log_delta, k, f);
        // For decreasing g the root is to the right when g(mid) > S.
        if ((lg > target) == decreasing)
            lo = mid;
        else
            hi = mid;
    }
    const double h_hat = 0.5 * (lo + hi);
    const double nd = static_cast<double>(n);
    const double asym_std = std::sqrt(asym_variance_A(h_hat, k, f)) / (k * std::sqrt(nd) * std::log(nd));
    return HurstEstimate{h_hat, k, f, n, asym_std};
}

double asym_variance_A(double t, double k, const VariationFilter& f) {
    const long l = static_cast<long>(f.lag());
    const auto c = autocorrelation(f.coeffs());
    const double p0 = pi_direct(t, 0, c, l);

    std::vector<double> rho_sq;
    for (long i = 1; i <= kRhoMaxLag; ++i) {
        const double p = i >= std::max<long>(16, 8 * l) ? pi_series(t, i, c, l) : pi_direct(t, i, c, l);
        const double rho = p / p0;
        if (i > l && std::abs(rho) < kRhoCutoff) break;
        rho_sq.push_back(rho * rho);
    }

    std::vector<double> powers = rho_sq;  // rho_i^{2j}
    double coeff = 0.5 * k * k;           // (c^k_{2j})^2 (2j)! at j = 1
    double total = 0.0;
    for (int j = 1; j <= kSeriesMaxTerms; ++j) {
        double inner = 1.0;
        for (double p : powers) inner += 2.0 * p;
        const double term = coeff * inner;
        total += term;
        if (std::abs(term) < kSeriesRelTol * std::abs(total)) break;
        const double factor = k - 2.0 * j;
        coeff *= factor * factor / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        if (coeff == 0.0) break;
        for (std::size_t i = 0; i < powers.size(); ++i) powers[i] *= rho_sq[i];
    }
    return total;
}

}  // namespace fbmre
