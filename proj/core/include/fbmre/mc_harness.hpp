#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbmre/effects.hpp"
#include "fbmre/errors.hpp"
#include "fbmre/hurst.hpp"
#include "fbmre/panel_model.hpp"

namespace fbmre {

struct ExperimentConfig {
    std::vector<double> h_list;
    std::vector<std::size_t> n_subjects_list;
    std::vector<std::size_t> n_obs_list;
    double horizon = 5.0;
    double mu0 = -2.0;
    double sigma20 = 1.0;
    std::size_t replications = 400;
    double k = 2.0;
    VariationFilter filter = diff2_filter();
    std::uint64_t base_seed = 20240101;
    bool estimate_hurst = false;
    NoiseSource sampler = NoiseSource::Exact;
    /// Worker threads for replications; 0 means hardware concurrency.
    std::size_t threads = 1;

    /// Throws RangeError on empty lists or R = 0.
    void validate() const;
};

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<std::size_t> counts;
};

struct EmpiricalSummary {
    double mean;
    /// Population form, divided by the sample count.
    double std;
};

struct HurstStats {
    double mean;
    double emp_std;
    std::size_t failures;  // replications where the estimate was out of range
    Histogram histogram;
};

struct CellSummary {
    double h;
    std::size_t n_subjects;
    std::size_t n_obs;
    double q;
    double mean_mu_hat;
    double emp_std_mu;
    double exact_std_mu;
    double mean_sigma2_hat;
    double emp_std_sigma2;
    double exact_std_sigma2;
    std::optional<HurstStats> hurst;
    Histogram hist_mu;
    Histogram hist_sigma2;  // empty when N = 1
};

struct ReplicationResult {
    EffectsEstimate effects;
    std::optional<double> h_hat;
};

/// Coordinates of one (H, N, n) cell and its position in the experiment.
struct CellSpec {
    std::size_t index;
    double h;
    std::size_t n_subjects;
    std::size_t n_obs;
};

/// Raised when a cell fails; the message carries the cell coordinates.
class CellError : public Error {
public:
    CellError(const CellSpec& cell, const std::string& what);
    const CellSpec& cell() const noexcept { return cell_; }

private:
    CellSpec cell_;
};

/// Cells in the order H (outer), N, n (inner).
std::vector<CellSpec> enumerate_cells(const ExperimentConfig& cfg);

/// All replications of one cell, indexed by replication. Replication r uses
/// RngStream(base_seed, cell.index * R + r), so results do not depend on
/// the thread count.
std::vector<ReplicationResult> run_cell_replications(const ExperimentConfig& cfg,
                                                     const CellSpec& cell);

CellSummary summarize_cell(const ExperimentConfig& cfg, const CellSpec& cell,
                           std::span<const ReplicationResult> reps);

std::vector<CellSummary> run_experiment(const ExperimentConfig& cfg);

EmpiricalSummary summarize_empirical(std::span<const double> samples);

/// Uniform bins over mean +- 4 std (mean +- 0.5 when std = 0); values outside
/// the span land in the edge bins so counts always sum to the sample count.
Histogram make_histogram(std::span<const double> samples, std::size_t bins = 30);

}  // namespace fbmre
