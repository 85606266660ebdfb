#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

#include "fbmre/mc_harness.hpp"

using namespace fbmre;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.h_list = {0.5};
    cfg.n_subjects_list = {50};
    cfg.n_obs_list = {4};
    cfg.horizon = 5.0;
    cfg.mu0 = -2.0;
    cfg.sigma20 = 1.0;
    cfg.replications = 400;
    cfg.base_seed = 123;
    return cfg;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_summary(const CellSummary& a, const CellSummary& b) {
    return same_bits(a.mean_mu_hat, b.mean_mu_hat) && same_bits(a.emp_std_mu, b.emp_std_mu) &&
           same_bits(a.mean_sigma2_hat, b.mean_sigma2_hat) &&
           same_bits(a.emp_std_sigma2, b.emp_std_sigma2) && same_bits(a.exact_std_mu, b.exact_std_mu) &&
           a.hist_mu.counts == b.hist_mu.counts && a.hist_sigma2.counts == b.hist_sigma2.counts &&
           a.hist_mu.edges == b.hist_mu.edges;
}

}  // namespace

TEST_CASE("summarize_empirical") {
    const auto a = summarize_empirical(std::vector<double>{1, 1, 1});
    CHECK(a.mean == 1.0);
    CHECK(a.std == 0.0);
    const auto b = summarize_empirical(std::vector<double>{0, 2});
    CHECK(b.mean == 1.0);
    CHECK(b.std == 1.0);

    std::mt19937_64 gen(1);
    std::normal_distribution<double> normal;
    std::vector<double> z(1000000);
    for (auto& v : z) v = normal(gen);
    const auto c = summarize_empirical(z);
    CHECK(std::abs(c.mean) < 0.01);
    CHECK(std::abs(c.std - 1.0) < 0.01);
    CHECK_THROWS_AS(summarize_empirical(std::vector<double>{}), DegenerateSampleError);
}

TEST_CASE("make_histogram") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.0, 100.0, -100.0};
    const auto h = make_histogram(x);
    CHECK(h.edges.size() == 31);
    CHECK(h.counts.size() == 30);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == x.size());
    const auto s = summarize_empirical(x);
    CHECK(h.edges.front() == doctest::Approx(s.mean - 4 * s.std));
    CHECK(h.edges.back() == doctest::Approx(s.mean + 4 * s.std));

    const auto flat = make_histogram(std::vector<double>{2.5});
    CHECK(flat.edges.front() == 2.0);
    CHECK(flat.edges.back() == 3.0);
    CHECK(std::accumulate(flat.counts.begin(), flat.counts.end(), std::size_t{0}) == 1);
}

TEST_CASE("cell H=0.5, N=50, n=4 against exact moments") {
    const auto cells = run_experiment(small_config());
    REQUIRE(cells.size() == 1);
    const auto& c = cells[0];
    CHECK(std::abs(c.exact_std_mu - 0.1549) < 5e-5);
    CHECK(std::abs(c.exact_std_sigma2 - 0.2376) < 5e-5);
    CHECK(std::abs(c.mean_mu_hat + 2.0) < 0.025);
    CHECK(c.emp_std_mu == doctest::Approx(0.1549).epsilon(0.15));
    CHECK(std::accumulate(c.hist_mu.counts.begin(), c.hist_mu.counts.end(), std::size_t{0}) == 400);
    CHECK(std::accumulate(c.hist_sigma2.counts.begin(), c.hist_sigma2.counts.end(), std::size_t{0}) == 400);
}

TEST_CASE("R = 1, N = 1 reduces to a single replication") {
    auto cfg = small_config();
    cfg.replications = 1;
    cfg.n_subjects_list = {1};
    const auto cells = run_experiment(cfg);
    REQUIRE(cells.size() == 1);

    const auto grid = SamplingGrid::uniform(4, 5.0);
    RngStream rng(cfg.base_seed, 0);
    const auto panel = PanelSimulator(grid, Hurst(0.5)).simulate(1, EffectsLaw(-2.0, 1.0), rng);
    const double mu = estimate_mu(xi_values(panel, build_gram(grid, Hurst(0.5))));
    CHECK(cells[0].mean_mu_hat == mu);
    CHECK(cells[0].emp_std_mu == 0.0);
    CHECK(std::isnan(cells[0].mean_sigma2_hat));
    CHECK(cells[0].hist_sigma2.counts.empty());

    cfg.n_subjects_list = {2};
    const auto two = run_experiment(cfg);
    CHECK(two[0].emp_std_mu == 0.0);
    CHECK(two[0].emp_std_sigma2 == 0.0);
}

TEST_CASE("Brownian exact std is the same for every n") {
    auto cfg = small_config();
    cfg.replications = 2;
    cfg.n_obs_list = {4, 32, 256};
    const auto cells = run_experiment(cfg);
    REQUIRE(cells.size() == 3);
    for (const auto& c : cells) {
        CHECK(std::abs(c.q - 5.0) < 1e-10);
        CHECK(std::abs(c.exact_std_mu - cells[0].exact_std_mu) < 1e-12);
    }
}

TEST_CASE("reproducible and independent of the thread count") {
    auto cfg = small_config();
    cfg.replications = 60;
    cfg.h_list = {0.15, 0.85};
    cfg.n_obs_list = {8, 16};
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    cfg.threads = 4;
    const auto c = run_experiment(cfg);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(same_summary(a[i], b[i]));
        CHECK(same_summary(a[i], c[i]));
    }
}

TEST_CASE("empirical std within 20% of exact std at R = 400") {
    auto cfg = small_config();
    cfg.h_list = {0.15, 0.5, 0.85};
    cfg.n_obs_list = {4, 32};
    cfg.base_seed = 999;
    for (const auto& c : run_experiment(cfg)) {
        INFO("H=" << c.h << " n=" << c.n_obs);
        CHECK(c.emp_std_mu == doctest::Approx(c.exact_std_mu).epsilon(0.20));
    }
}

TEST_CASE("Hurst statistics when requested") {
    auto cfg = small_config();
    cfg.replications = 40;
    cfg.n_obs_list = {2, 256};
    cfg.h_list = {0.3};
    cfg.estimate_hurst = true;
    const auto cells = run_experiment(cfg);
    REQUIRE(cells.size() == 2);
    REQUIRE(cells[0].hurst.has_value());
    CHECK(cells[0].hurst->failures == 40);  // n = 2 leaves no window for diff2
    REQUIRE(cells[1].hurst.has_value());
    CHECK(cells[1].hurst->failures == 0);
    CHECK(std::abs(cells[1].hurst->mean - 0.3) < 0.05);
}

TEST_CASE("errors carry cell coordinates") {
    auto cfg = small_config();
    cfg.h_list = {0.5, 0.995};
    cfg.replications = 2;
    try {
        run_experiment(cfg);
        FAIL("expected CellError");
    } catch (const CellError& e) {
        CHECK(std::string(e.what()).find("H=0.995") != std::string::npos);
        CHECK(e.cell().index == 1);
    }
    auto bad = small_config();
    bad.h_list.clear();
    CHECK_THROWS_AS(run_experiment(bad), RangeError);
    bad = small_config();
    bad.replications = 0;
    CHECK_THROWS_AS(run_experiment(bad), RangeError);
}
