#include "fbmre/effects.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "fbmre/errors.hpp"

namespace fbmre {

namespace {

void require_same_grid(const Panel& panel, const GramMatrix& gram) {
    if (!(panel.grid() == gram.grid()))
        throw GridMismatchError("panel grid differs from the Gram matrix grid");
}

}  // namespace

Xi xi_values(const Panel& panel, const GramMatrix& gram) {
    require_same_grid(panel, gram);
    const double q = gram.quad_form_uu();
    Xi xi;
    xi.values.reserve(panel.n_subjects());
    for (std::size_t i = 0; i < panel.n_subjects(); ++i)
        xi.values.push_back(gram.quad_form_uy(panel.subject(i)) / q);
    return xi;
}

double estimate_mu(const Xi& xi) {
    if (xi.values.empty()) throw DegenerateSampleError("mu estimate needs at least one subject");
    double sum = 0.0;
    for (double v : xi.values) sum += v;
    return sum / static_cast<double>(xi.values.size());
}

double estimate_sigma2(const Xi& xi, double q) {
    const std::size_t n = xi.values.size();
    if (n < 2) throw DegenerateSampleError("sigma2 estimate needs at least two subjects");
    // Centered two-pass form of (1/N) sum xi^2 - ((1/N) sum xi)^2.
    const double mean = estimate_mu(xi);
    double ss = 0.0;
    for (double v : xi.values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(n) - 1.0 / q;
}

ExactMoments exact_moments(double sigma2, std::size_t n_subjects, double q) {
    if (n_subjects == 0) throw DegenerateSampleError("exact moments need N >= 1");
    if (!(q > 0.0)) throw RangeError("quadratic form u'V^{-1}u must be positive");
    const double n = static_cast<double>(n_subjects);
    const double beta = sigma2 + 1.0 / q;
    return ExactMoments{
        std::sqrt(beta / n),
        (n - 1.0) * sigma2 / n - 1.0 / (n * q),
        std::sqrt(2.0 * (n - 1.0) / (n * n)) * beta,
    };
}

EffectsEstimate estimate_effects(const Panel& panel, const GramMatrix& gram) {
    const Xi xi = xi_values(panel, gram);
    const double q = gram.quad_form_uu();
    const double mu = estimate_mu(xi);
    const double s2 = estimate_sigma2(xi, q);
    const auto m = exact_moments(s2, xi.values.size(), q);
    return EffectsEstimate{mu, s2, q, xi.values.size(), s2 + 1.0 / q, m.std_mu, m.std_sigma2};
}

ConfidenceIntervals confidence_intervals(const EffectsEstimate& est, double level) {
    if (!(level >= 0.0 && level < 1.0)) {
        std::ostringstream msg;
        msg << "confidence level must lie in [0, 1), got " << level;
        throw RangeError(msg.str());
    }
    if (est.n_subjects < 2) throw DegenerateSampleError("intervals need N >= 2");
    const boost::math::normal_distribution<double> std_normal;
    const double z = boost::math::quantile(std_normal, 0.5 * (1.0 + level));
    const double n = static_cast<double>(est.n_subjects);
    const double half_mu = z * std::sqrt(est.beta_hat / n);
    const double half_s2 = z * est.beta_hat * std::sqrt(2.0 / n);
    return ConfidenceIntervals{level,
                               {est.mu_hat - half_mu, est.mu_hat + half_mu},
                               {est.sigma2_hat - half_s2, est.sigma2_hat + half_s2}};
}

double log_marginal_likelihood(const Panel& panel, const GramMatrix& gram, const EffectsLaw& law) {
    require_same_grid(panel, gram);
    if (!(law.sigma2 > 0.0))
        throw RangeError("marginal likelihood needs sigma2 > 0");
    const double n = static_cast<double>(gram.size());
    const double q = gram.quad_form_uu();
    const double prec = q + 1.0 / law.sigma2;
    const double shift = law.mu / law.sigma2;
    const double constant = -0.5 * n * std::log(2.0 * std::numbers::pi) -
                            0.5 * std::log(law.sigma2) - 0.5 * gram.log_det() -
                            0.5 * std::log(prec);
    double total = 0.0;
    for (std::size_t i = 0; i < panel.n_subjects(); ++i) {
        const auto y = panel.subject(i);
        const double uy = gram.quad_form_uy(y);
        const double yy = gram.quad_form_yy(y);
        total += constant -
                 0.5 * (law.mu * shift + yy - (uy + shift) * (uy + shift) / prec);
    }
    return total;
}

double continuous_mu_tilde(const Panel& panel) {
    double sum = 0.0;
    const std::size_t last = panel.n_obs() - 1;
    for (std::size_t i = 0; i < panel.n_subjects(); ++i) sum += panel.subject(i)[last];
    return sum / (static_cast<double>(panel.n_subjects()) * panel.grid().horizon());
}

}  // namespace fbmre
