#include "fbmre/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace fbmre {

namespace {

std::string cell_label(const CellSpec& cell) {
    std::ostringstream os;
    os << "cell (H=" << cell.h << ", N=" << cell.n_subjects << ", n=" << cell.n_obs << ")";
    return os.str();
}

// sigma2 needs two subjects; a single-subject cell reports mu only.
EffectsEstimate estimate_cell_effects(const Panel& panel, const GramMatrix& gram) {
    if (panel.n_subjects() >= 2) return estimate_effects(panel, gram);
    const double nan = std::nan("");
    const double q = gram.quad_form_uu();
    return EffectsEstimate{estimate_mu(xi_values(panel, gram)), nan, q, 1, nan, nan, nan};
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void ExperimentConfig::validate() const {
    if (h_list.empty()) throw RangeError("h_list must not be empty");
    if (n_subjects_list.empty()) throw RangeError("n_subjects_list must not be empty");
    if (n_obs_list.empty()) throw RangeError("n_obs_list must not be empty");
    if (replications == 0) throw RangeError("replications must be >= 1");
    if (!(horizon > 0.0)) throw RangeError("horizon T must be positive");
    if (!(sigma20 >= 0.0)) throw RangeError("sigma20 must be >= 0");
    if (!(k > 0.0)) throw RangeError("k must be positive");
    for (double h : h_list) Hurst{h};
    for (auto n : n_subjects_list)
        if (n == 0) throw RangeError("every N must be >= 1");
    for (auto n : n_obs_list)
        if (n == 0) throw RangeError("every n must be >= 1");
}

CellError::CellError(const CellSpec& cell, const std::string& what)
    : Error(cell_label(cell) + ": " + what), cell_(cell) {}

std::vector<CellSpec> enumerate_cells(const ExperimentConfig& cfg) {
    std::vector<CellSpec> cells;
    for (double h : cfg.h_list)
        for (auto big_n : cfg.n_subjects_list)
            for (auto n : cfg.n_obs_list) cells.push_back({cells.size(), h, big_n, n});
    return cells;
}

std::vector<ReplicationResult> run_cell_replications(const ExperimentConfig& cfg,
                                                     const CellSpec& cell) {
    const std::size_t reps = cfg.replications;
    std::vector<ReplicationResult> out(reps);
    try {
        const auto grid = SamplingGrid::uniform(cell.n_obs, cfg.horizon);
        const Hurst h(cell.h);
        const GramMatrix gram(grid, h);
        const PanelSimulator sim(grid, h, cfg.sampler);
        const EffectsLaw law(cfg.mu0, cfg.sigma20);

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t r = next++; r < reps; r = next++) {
                try {
                    RngStream rng(cfg.base_seed, cell.index * reps + r);
                    const Panel panel = sim.simulate(cell.n_subjects, law, rng);
                    ReplicationResult res{estimate_cell_effects(panel, gram), std::nullopt};
                    if (cfg.estimate_hurst) {
                        try {
                            res.h_hat = estimate_h(panel.subject(0), cfg.horizon, cfg.k, cfg.filter).h_hat;
                        } catch (const OutOfRangeError&) {
                        } catch (const SeriesTooShortError&) {
                        }
                    }
                    out[r] = std::move(res);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = reps;
                }
            }
        };

        const std::size_t n_threads = std::min(resolve_threads(cfg.threads), reps);
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        }
        if (failure) std::rethrow_exception(failure);
    } catch (const CellError&) {
        throw;
    } catch (const std::exception& e) {
        throw CellError(cell, e.what());
    }
    return out;
}

CellSummary summarize_cell(const ExperimentConfig& cfg, const CellSpec& cell,
                           std::span<const ReplicationResult> reps) {
    std::vector<double> mu, s2, hh;
    mu.reserve(reps.size());
    s2.reserve(reps.size());
    for (const auto& r : reps) {
        mu.push_back(r.effects.mu_hat);
        s2.push_back(r.effects.sigma2_hat);
        if (r.h_hat) hh.push_back(*r.h_hat);
    }
    const double q = reps.empty() ? 0.0 : reps.front().effects.q;
    const auto exact = exact_moments(cfg.sigma20, cell.n_subjects, q);
    const auto smu = summarize_empirical(mu);
    const bool have_s2 = cell.n_subjects >= 2;
    const auto ss2 = have_s2 ? summarize_empirical(s2) : EmpiricalSummary{std::nan(""), std::nan("")};

    CellSummary out{cell.h,       cell.n_subjects,   cell.n_obs,       q,
                    smu.mean,     smu.std,           exact.std_mu,     ss2.mean,
                    ss2.std,      exact.std_sigma2,  std::nullopt,     make_histogram(mu),
                    have_s2 ? make_histogram(s2) : Histogram{}};
    if (cfg.estimate_hurst) {
        HurstStats hs{std::nan(""), std::nan(""), reps.size() - hh.size(), {}};
        if (!hh.empty()) {
            const auto sh = summarize_empirical(hh);
            hs.mean = sh.mean;
            hs.emp_std = sh.std;
            hs.histogram = make_histogram(hh);
        }
        out.hurst = std::move(hs);
    }
    return out;
}

std::vector<CellSummary> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<CellSummary> out;
    for (const auto& cell : enumerate_cells(cfg)) {
        const auto reps = run_cell_replications(cfg, cell);
        out.push_back(summarize_cell(cfg, cell, reps));
    }
    return out;
}

EmpiricalSummary summarize_empirical(std::span<const double> samples) {
    if (samples.empty()) throw DegenerateSampleError("summary needs at least one sample");
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins) {
    if (bins == 0) throw RangeError("histogram needs at least one bin");
    const auto s = summarize_empirical(samples);
    const double half = s.std > 0.0 ? 4.0 * s.std : 0.5;
    const double lo = s.mean - half;
    const double width = 2.0 * half / static_cast<double>(bins);
    Histogram hist;
    hist.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) hist.edges[b] = lo + width * static_cast<double>(b);
    hist.counts.assign(bins, 0);
    for (double v : samples) {
        const double pos = std::floor((v - lo) / width);
        const auto b = pos < 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
        ++hist.counts[b];
    }
    return hist;
}

}  // namespace fbmre
