#include "cli/result_json.hpp"

#include <algorithm>

namespace fbmre::cli {

nlohmann::json to_json(const HurstEstimate& est) {
    return {
        {"h_hat", est.h_hat},
        {"asym_std", est.asym_std},
        {"n", est.n},
        {"k", est.k},
        {"filter", est.filter.coeffs()},
        {"filter_order", est.filter.order()},
    };
}

nlohmann::json to_json(const EffectsEstimate& est) {
    return {
        {"mu_hat", est.mu_hat},
        {"sigma2_hat", est.sigma2_hat},
        {"sigma2_hat_clamped", std::max(0.0, est.sigma2_hat)},
        {"q", est.q},
        {"n_subjects", est.n_subjects},
        {"beta_hat", est.beta_hat},
        {"exact_std",
         {{"basis", "plug-in"},
          {"std_mu", est.exact_std_mu},
          {"std_sigma2", est.exact_std_sigma2}}},
    };
}

nlohmann::json to_json(const ConfidenceIntervals& ci) {
    return {
        {"level", ci.level},
        {"mu", {ci.mu.lo, ci.mu.hi}},
        {"sigma2", {ci.sigma2.lo, ci.sigma2.hi}},
    };
}

nlohmann::json to_json(const Histogram& hist) {
    return {{"edges", hist.edges}, {"counts", hist.counts}};
}

nlohmann::json to_json(const CellSummary& cell) {
    nlohmann::json j = {
        {"H", cell.h},
        {"N", cell.n_subjects},
        {"n", cell.n_obs},
        {"q", cell.q},
        {"mean_mu", cell.mean_mu_hat},
        {"exact_std_mu", cell.exact_std_mu},
        {"emp_std_mu", cell.emp_std_mu},
        {"mean_sigma2", cell.mean_sigma2_hat},
        {"exact_std_sigma2", cell.exact_std_sigma2},
        {"emp_std_sigma2", cell.emp_std_sigma2},
        {"exact_std_basis", "true sigma2"},
        {"hist_mu", to_json(cell.hist_mu)},
        {"hist_sigma2", to_json(cell.hist_sigma2)},
    };
    if (cell.hurst) {
        j["hurst"] = {
            {"mean", cell.hurst->mean},
            {"emp_std", cell.hurst->emp_std},
            {"failures", cell.hurst->failures},
            {"histogram", to_json(cell.hurst->histogram)},
        };
    }
    return j;
}

EffectsEstimate effects_from_json(const nlohmann::json& j) {
    return EffectsEstimate{
        j.at("mu_hat").get<double>(),
        j.at("sigma2_hat").get<double>(),
        j.at("q").get<double>(),
        j.at("n_subjects").get<std::size_t>(),
        j.at("beta_hat").get<double>(),
        j.at("exact_std").at("std_mu").get<double>(),
        j.at("exact_std").at("std_sigma2").get<double>(),
    };
}

HurstEstimate hurst_from_json(const nlohmann::json& j) {
    return HurstEstimate{
        j.at("h_hat").get<double>(),
        j.at("k").get<double>(),
        validate_filter(j.at("filter").get<std::vector<double>>()),
        j.at("n").get<std::size_t>(),
        j.at("asym_std").get<double>(),
    };
}

}  // namespace fbmre::cli
