#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fbmre/fbm_sim.hpp"
#include "fbmre/gram.hpp"
#include "fbmre/rng.hpp"

namespace fbmre {

/// Gaussian law N(mu, sigma2) of the subject-specific drift rate.
struct EffectsLaw {
    double mu = 0.0;
    double sigma2 = 0.0;

    EffectsLaw() = default;
    EffectsLaw(double mu_, double sigma2_);
};

/// N subjects observed on one shared grid. Row i holds Y^i(t_1..t_n).
class Panel {
public:
    Panel(SamplingGrid grid, std::size_t n_subjects);
    Panel(SamplingGrid grid, std::vector<std::vector<double>> rows);

    const SamplingGrid& grid() const noexcept { return grid_; }
    std::size_t n_subjects() const noexcept { return n_subjects_; }
    std::size_t n_obs() const noexcept { return grid_.size(); }

    std::span<const double> subject(std::size_t i) const;
    std::span<double> subject(std::size_t i);

    /// Drift rates used to simulate the panel; absent for observed data.
    /// Estimators never read this.
    const std::optional<std::vector<double>>& true_effects() const noexcept { return effects_; }
    void set_true_effects(std::vector<double> phi);

private:
    SamplingGrid grid_;
    std::size_t n_subjects_;
    std::vector<double> values_;
    std::optional<std::vector<double>> effects_;
};

enum class NoiseSource {
    Exact,      ///< Cholesky factor of V(H); any grid.
    Circulant,  ///< Davies-Harte; uniform grids only.
    Auto,       ///< Circulant on uniform grids, falling back to Exact.
    Zero,       ///< fBm replaced by 0 (test hook: Y = t phi exactly).
};

/// Reusable panel generator: factorizes V(H) or the circulant embedding once.
class PanelSimulator {
public:
    PanelSimulator(SamplingGrid grid, Hurst h, NoiseSource source = NoiseSource::Exact);

    const SamplingGrid& grid() const noexcept { return grid_; }
    /// The source actually used after resolving Auto.
    NoiseSource source() const noexcept { return source_; }

    /// Draws phi_1..phi_N from `law`, then one fBm path per subject, all
    /// from `rng` in that order.
    Panel simulate(std::size_t n_subjects, const EffectsLaw& law, RngStream& rng) const;

private:
    SamplingGrid grid_;
    Hurst h_;
    NoiseSource source_;
    std::optional<GramMatrix> gram_;
    std::optional<CirculantFbmSampler> circulant_;
};

Panel simulate_panel(std::size_t n_subjects, const SamplingGrid& grid, Hurst h,
                     const EffectsLaw& law, RngStream& rng,
                     NoiseSource source = NoiseSource::Exact);

/// Y(t_j) = X(t_j) - X(t_0) - int_{t_0}^{t_j} a(X(s)) ds with the integral
/// replaced by the trapezoidal rule on the observation times. `times` and
/// `x` include the initial point; the result has one entry fewer.
/// The quadrature error is O(dt^2) for nonlinear drifts.
std::vector<double> transform_to_y(std::span<const double> times, std::span<const double> x,
                                   const std::function<double(double)>& drift);

}  // namespace fbmre
