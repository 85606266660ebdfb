#pragma once

#include <span>
#include <vector>

#include "fbmre/gram.hpp"
#include "fbmre/panel_model.hpp"

namespace fbmre {

/// Per-subject GLS slopes xi_i = u'V^{-1}Y^i / u'V^{-1}u.
struct Xi {
    std::vector<double> values;
};

/// Closed-form finite-sample moments of the effects estimators.
struct ExactMoments {
    double std_mu;
    double mean_sigma2;
    double std_sigma2;
};

struct EffectsEstimate {
    double mu_hat;
    /// Raw estimate; negative values are admissible in finite samples.
    double sigma2_hat;
    /// u'V^{-1}u.
    double q;
    std::size_t n_subjects;
    /// sigma2_hat + 1/q, the plug-in variance of xi.
    double beta_hat;
    /// exact_moments evaluated at sigma2_hat.
    double exact_std_mu;
    double exact_std_sigma2;
};

struct Interval {
    double lo;
    double hi;
};

struct ConfidenceIntervals {
    double level;
    Interval mu;
    Interval sigma2;
};

Xi xi_values(const Panel& panel, const GramMatrix& gram);

/// Arithmetic mean of xi.
double estimate_mu(const Xi& xi);

/// Uncorrected sample variance of xi minus 1/q. Needs N >= 2.
double estimate_sigma2(const Xi& xi, double q);

/// std(mu_hat) = sqrt(sigma2/N + 1/(Nq)),
/// E(sigma2_hat) = (N-1) sigma2 / N - 1/(Nq),
/// std(sigma2_hat) = sqrt(2(N-1)/N^2) (sigma2 + 1/q).
/// `sigma2` may be the true value or a plug-in estimate.
ExactMoments exact_moments(double sigma2, std::size_t n_subjects, double q);

/// Full pipeline for a panel with known H: xi, mu_hat, sigma2_hat and the
/// plug-in exact standard deviations.
EffectsEstimate estimate_effects(const Panel& panel, const GramMatrix& gram);

/// Plug-in asymptotic intervals: mu_hat +- z sqrt(beta_hat / N) and
/// sigma2_hat +- z beta_hat sqrt(2 / N), z the N(0,1) quantile at (1 + level)/2.
ConfidenceIntervals confidence_intervals(const EffectsEstimate& est, double level);

/// Log of the marginal likelihood with phi integrated out in closed form,
/// summed over subjects. log det V comes from the Cholesky factor.
double log_marginal_likelihood(const Panel& panel, const GramMatrix& gram, const EffectsLaw& law);

/// Continuous-observation estimator (1/NT) sum_i Y^i(T).
double continuous_mu_tilde(const Panel& panel);

}  // namespace fbmre
