#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fbmre/errors.hpp"
#include "fbmre/fbm_sim.hpp"
#include "fbmre/hurst.hpp"
#include "support/oracles.hpp"

using namespace fbmre;

namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;

// Direct 50-digit evaluation of the filtered-fBm autocovariance.
double pi_oracle(double t, long j, const std::vector<double>& g) {
    Real50 acc = 0;
    const Real50 two_t = 2 * Real50(t);
    for (std::size_t q = 0; q < g.size(); ++q)
        for (std::size_t r = 0; r < g.size(); ++r) {
            const long d = std::abs(static_cast<long>(q) - static_cast<long>(r) + j);
            if (d > 0) acc += Real50(g[q]) * Real50(g[r]) * boost::multiprecision::pow(Real50(d), two_t);
        }
    return static_cast<double>(-acc / 2);
}

double moment_sum(const std::vector<double>& g, int r) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += std::pow(static_cast<double>(j), r) * g[j];
    return s;
}

}  // namespace

TEST_CASE("validate_filter certifies the order") {
    CHECK(validate_filter({1, -2, 1}).order() == 2);
    CHECK_THROWS_AS(validate_filter({1, -1}), OrderTooLowError);
    CHECK_THROWS_AS(validate_filter({1, 1}), OrderTooLowError);
    CHECK_THROWS_AS(validate_filter({0, 0, 0}), OrderTooLowError);
    CHECK_THROWS_AS(validate_filter({1}), OrderTooLowError);

    const std::vector<double> d3{-1, 3, -3, 1};
    CHECK(moment_sum(d3, 0) == 0.0);
    CHECK(moment_sum(d3, 1) == 0.0);
    CHECK(moment_sum(d3, 2) == 0.0);
    CHECK(moment_sum(d3, 3) == 6.0);
    CHECK(validate_filter(d3).order() == 3);
    CHECK(diff3_filter().lag() == 3);

    // A non-integer order-2 filter.
    CHECK(validate_filter({0.5, -1.0, 0.5}).order() == 2);
}

TEST_CASE("pi_gamma values and symmetry") {
    const auto f = diff2_filter();
    CHECK(pi_gamma(0.5, 0, f) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pi_gamma(0.5, 1, f) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(pi_gamma(0.5, 2, f)) < 1e-14);
    CHECK(std::abs(pi_gamma(0.5, 40, f)) < 1e-14);

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ut(0.02, 0.98);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = ut(gen);
        const long j = static_cast<long>(gen() % 60);
        CHECK(pi_gamma(t, j, f) == pi_gamma(t, -j, f));
        CHECK(pi_gamma(t, j, diff3_filter()) == pi_gamma(t, -j, diff3_filter()));
    }
}

TEST_CASE("pi_gamma at large lags agrees with a long-double oracle") {
    for (const auto& f : {diff2_filter(), diff3_filter()}) {
        for (double t : {0.1, 0.35, 0.5001, 0.8, 0.95}) {
            for (long j : {3L, 15L, 16L, 24L, 25L, 60L, 150L}) {
                const double ref = pi_oracle(t, j, f.coeffs());
                const double got = pi_gamma(t, j, f);
                INFO("t=" << t << " j=" << j << " lag=" << f.lag() << " ref=" << ref << " got=" << got);
                // Direct double evaluation (small lags) loses ~1e-16 j^{2t} to cancellation.
                CHECK(std::abs(got - ref) <= 1e-9 * std::abs(ref) + 1e-16 * std::pow(j + 4.0, 2 * t) * 40);
            }
        }
    }
}

TEST_CASE("e_k is the k-th absolute normal moment") {
    CHECK(e_k(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e_k(1.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
    CHECK(e_k(1.0) == doctest::Approx(0.79788).epsilon(1e-5));
    CHECK(e_k(4.0) == doctest::Approx(3.0).epsilon(1e-14));
    const double k = 1.5;
    const double ref = 2.0 * oracle::simpson(
                                 [&](double z) { return std::pow(z, k) * std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI); },
                                 0.0, 12.0, 200000);
    CHECK(e_k(k) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("s_n and k_variation") {
    const auto f = diff2_filter();
    SUBCASE("pure linear drift is annihilated") {
        std::vector<double> y(64);
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = 3.0 * static_cast<double>(j + 1) / 64.0;
        CHECK(s_n(y, 2.0, f) == 0.0);
        CHECK(s_n(y, 1.3, diff3_filter()) == 0.0);
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = -2.7 * static_cast<double>(j + 1) / 64.0;
        CHECK(s_n(y, 2.0, f) < 1e-28);
    }
    SUBCASE("constant series including the origin is annihilated") {
        CHECK(k_variation(std::vector<double>(10, 4.2), 2.0, f) == 0.0);
        CHECK(k_variation(std::vector<double>(10, 4.25), 3.0, diff3_filter()) == 0.0);
    }
    SUBCASE("windows and indexing") {
        // z = (0, 1, 4, 9, 16): filtered (z_i - 2 z_{i-1} + z_{i-2}) = 2 for i = 2, 3; z_4 unused.
        const std::vector<double> y{1, 4, 9, 16};
        CHECK(s_n(y, 2.0, f) == 4.0);
        CHECK(s_n(std::vector<double>{1, 4, 9, 1e6}, 2.0, f) == 4.0);
        CHECK(s_n(std::vector<double>{1, 4, 9}, 1.0, f) == 2.0);
        CHECK_THROWS_AS(s_n(std::vector<double>{1, 4}, 2.0, f), SeriesTooShortError);
    }
    SUBCASE("scale equivariance") {
        RngStream rng(1, 0);
        const auto y = sample_fbm_fast(128, 1.0, Hurst(0.4), rng).values;
        for (double k : {1.0, 2.0, 3.5}) {
            std::vector<double> y4(y.size()), y3(y.size());
            for (std::size_t j = 0; j < y.size(); ++j) {
                y4[j] = -4.0 * y[j];
                y3[j] = 3.0 * y[j];
            }
            CHECK(s_n(y4, k, f) == std::pow(4.0, k) * s_n(y, k, f));
            CHECK(s_n(y3, k, f) == doctest::Approx(std::pow(3.0, k) * s_n(y, k, f)).epsilon(1e-13));
        }
    }
    SUBCASE("Brownian expectation 2/n") {
        std::mt19937_64 gen(2);
        std::normal_distribution<double> normal;
        const std::size_t n = 256;
        std::vector<double> s;
        for (int r = 0; r < 1000; ++r) {
            std::vector<double> y(n);
            double acc = 0.0;
            for (auto& v : y) v = (acc += normal(gen) / std::sqrt(static_cast<double>(n)));
            s.push_back(s_n(y, 2.0, f));
        }
        CHECK(oracle::mean(s) == doctest::Approx(2.0 / n).epsilon(0.05));
    }
}

TEST_CASE("g_scale") {
    const auto f = diff2_filter();
    CHECK(g_scale(0.5, 256, 2.0, f) == doctest::Approx(0.0078125).epsilon(1e-13));
    for (double t : {0.1, 0.3, 0.77})
        CHECK(g_scale(t, 100, 2.0, f) ==
              doctest::Approx(std::pow(100.0, -2 * t) * pi_gamma(t, 0, f)).epsilon(1e-13));
    for (std::size_t n : {2u, 4u, 256u, 4096u}) {
        double prev = g_scale(0.01, n, 2.0, f);
        bool monotone = true;
        for (int i = 11; i <= 990; ++i) {
            const double cur = g_scale(i * 1e-3, n, 2.0, f);
            monotone = monotone && cur < prev;
            prev = cur;
        }
        CHECK(monotone);
    }
    CHECK_THROWS_AS(g_scale(1.0, 16, 2.0, f), DomainError);
}

TEST_CASE("estimate_h: inversion round trip") {
    const auto f = diff2_filter();
    RngStream rng(3, 0);
    const auto base = sample_fbm_fast(512, 1.0, Hurst(0.5), rng).values;
    const double s0 = s_n(base, 2.0, f);
    for (double t = 0.1; t < 0.95; t += 0.1) {
        const double lambda = std::sqrt(g_scale(t, 512, 2.0, f) / s0);
        std::vector<double> y(base.size());
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = lambda * base[j];
        CHECK(std::abs(estimate_h(y, 1.0, 2.0, f).h_hat - t) < 1e-9);
    }
    // Arbitrary horizon: g uses the spacing T/n.
    const double lambda = std::sqrt(g_delta(0.3, 5.0 / 512, 2.0, f) / s0);
    std::vector<double> y(base.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = lambda * base[j];
    CHECK(std::abs(estimate_h(y, 5.0, 2.0, f).h_hat - 0.3) < 1e-9);
}

TEST_CASE("estimate_h: consistency at n = 2^12") {
    const auto f = diff2_filter();
    const CirculantFbmSampler sampler(4096, 1.0, Hurst(0.5));
    std::vector<double> h;
    for (int r = 0; r < 100; ++r) {
        RngStream rng(4, r);
        h.push_back(estimate_h(sampler.sample(rng).values, 1.0, 2.0, f).h_hat);
    }
    CHECK(std::abs(oracle::mean(h) - 0.5) < 0.01);
}

TEST_CASE("estimate_h: drift invariance") {
    const auto f = diff2_filter();
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        RngStream rng(5, trial);
        auto y = sample_fbm_fast(1024, 1.0, Hurst(0.2 + 0.03 * trial), rng).values;
        // Dyadic lattice: every sum below is exact, so annihilation is bit-exact.
        for (auto& v : y) v = std::ldexp(std::round(std::ldexp(v, 40)), -40);
        const double c = std::ldexp(std::round(std::ldexp(
                                         std::uniform_real_distribution<double>(-1e3, 1e3)(gen), 20)),
                                     -20);
        std::vector<double> shifted(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) shifted[j] = y[j] + c * (static_cast<double>(j + 1) / 1024.0);
        const auto a = estimate_h(y, 1.0, 2.0, f);
        const auto b = estimate_h(shifted, 1.0, 2.0, f);
        CHECK(a.h_hat == b.h_hat);
        CHECK(a.asym_std == b.asym_std);

        // Generic doubles: equal up to rounding of y + c t.
        const double c2 = std::uniform_real_distribution<double>(-1e3, 1e3)(gen);
        for (std::size_t j = 0; j < y.size(); ++j) shifted[j] = y[j] + c2 * (j + 1) / 1024.0;
        CHECK(std::abs(estimate_h(shifted, 1.0, 2.0, f).h_hat - a.h_hat) < 1e-9);
    }
}

TEST_CASE("estimate_h: errors") {
    const auto f = diff2_filter();
    std::vector<double> drift(32);
    for (std::size_t j = 0; j < drift.size(); ++j) drift[j] = 0.5 * (j + 1);
    CHECK_THROWS_AS(estimate_h(drift, 16.0, 2.0, f), OutOfRangeError);
    std::vector<double> wild(32);
    for (std::size_t j = 0; j < wild.size(); ++j) wild[j] = (j % 2 ? 1e8 : -1e8);
    CHECK_THROWS_AS(estimate_h(wild, 1.0, 2.0, f), OutOfRangeError);
    CHECK_THROWS_AS(estimate_h(std::vector<double>{1.0, 2.0}, 1.0, 2.0, f), SeriesTooShortError);
}

TEST_CASE("asym_variance_A") {
    const auto f = diff2_filter();
    CHECK(std::abs(asym_variance_A(0.5, 2.0, f) - 3.0) < 1e-9);
    // k = 4 at t = 1/2: 8 * 1.5 + (8/3) * 1.125 = 15 (hand evaluation).
    CHECK(asym_variance_A(0.5, 4.0, f) == doctest::Approx(15.0).epsilon(1e-12));

    for (double t : {0.2, 0.4, 0.7}) {
        double sum = 1.0;
        const double p0 = pi_oracle(t, 0, f.coeffs());
        for (long i = 1; i <= 2000; ++i) {
            const double r = pi_oracle(t, i, f.coeffs()) / p0;
            sum += 2.0 * r * r;
        }
        CHECK(asym_variance_A(t, 2.0, f) == doctest::Approx(2.0 * static_cast<double>(sum)).epsilon(1e-9));
    }
    // Non-even k: the Hermite series has infinitely many terms but converges.
    const double a1 = asym_variance_A(0.6, 1.0, f);
    CHECK(std::isfinite(a1));
    CHECK(a1 > 0.0);
    CHECK(std::isfinite(asym_variance_A(0.99, 2.0, f)));
}

TEST_CASE("asym_variance_A matches the Monte Carlo variance of S_n (k = 4)") {
    const auto f = diff2_filter();
    const std::size_t n = 1 << 15;
    std::mt19937_64 gen(7);
    std::normal_distribution<double> normal;
    const double expected = 12.0 / (static_cast<double>(n) * n);  // 3 pi(0)^2 n^{-2}
    std::vector<double> ratios;
    std::vector<double> y(n);
    for (int r = 0; r < 600; ++r) {
        double acc = 0.0;
        for (auto& v : y) v = (acc += normal(gen) / std::sqrt(static_cast<double>(n)));
        ratios.push_back(s_n(y, 4.0, f) / expected);
    }
    const double a_mc = static_cast<double>(n) * oracle::variance(ratios);
    CHECK(a_mc == doctest::Approx(asym_variance_A(0.5, 4.0, f)).epsilon(0.2));
}

TEST_CASE("rho_t is a correlation: rho(0) = 1 and |rho(i)| <= 1") {
    for (const auto& f : {diff2_filter(), diff3_filter(), validate_filter({1, -3, 3, -1, 0.0})})
        for (double t : {0.1, 0.5, 0.9}) {
            CHECK(rho_gamma(t, 0, f) == 1.0);
            for (long i = 1; i < 30; ++i) CHECK(std::abs(rho_gamma(t, i, f)) <= 1.0);
        }
}
