#include "fbmre/panel_model.hpp"

#include <cmath>
#include <sstream>

#include "fbmre/errors.hpp"

namespace fbmre {

EffectsLaw::EffectsLaw(double mu_, double sigma2_) : mu(mu_), sigma2(sigma2_) {
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_))
        throw RangeError("effects variance sigma2 must be finite and >= 0");
    if (!std::isfinite(mu_)) throw RangeError("effects mean mu must be finite");
}

Panel::Panel(SamplingGrid grid, std::size_t n_subjects)
    : grid_(std::move(grid)), n_subjects_(n_subjects), values_(n_subjects * grid_.size(), 0.0) {
    if (n_subjects == 0) throw DimensionError("panel needs at least one subject");
}

Panel::Panel(SamplingGrid grid, std::vector<std::vector<double>> rows)
    : Panel(std::move(grid), rows.size()) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != grid_.size()) {
            std::ostringstream msg;
            msg << "subject " << i << " has " << rows[i].size() << " values, grid has "
                << grid_.size();
            throw DimensionError(msg.str());
        }
        std::copy(rows[i].begin(), rows[i].end(), subject(i).begin());
    }
}

std::span<const double> Panel::subject(std::size_t i) const {
    if (i >= n_subjects_) throw DimensionError("subject index out of range");
    return {values_.data() + i * grid_.size(), grid_.size()};
}

std::span<double> Panel::subject(std::size_t i) {
    if (i >= n_subjects_) throw DimensionError("subject index out of range");
    return {values_.data() + i * grid_.size(), grid_.size()};
}

void Panel::set_true_effects(std::vector<double> phi) {
    if (phi.size() != n_subjects_) throw DimensionError("one effect per subject expected");
    effects_ = std::move(phi);
}

PanelSimulator::PanelSimulator(SamplingGrid grid, Hurst h, NoiseSource source)
    : grid_(std::move(grid)), h_(h), source_(source) {
    if (source_ == NoiseSource::Auto) {
        source_ = NoiseSource::Exact;
        if (grid_.is_uniform()) {
            try {
                circulant_.emplace(grid_.size(), grid_.horizon(), h_);
                source_ = NoiseSource::Circulant;
            } catch (const NegativeEigenvalueError&) {
            }
        }
    } else if (source_ == NoiseSource::Circulant) {
        if (!grid_.is_uniform())
            throw RangeError("circulant sampler requires a uniform grid t_j = jT/n");
        circulant_.emplace(grid_.size(), grid_.horizon(), h_);
    }
    if (source_ == NoiseSource::Exact) gram_.emplace(grid_, h_);
}

Panel PanelSimulator::simulate(std::size_t n_subjects, const EffectsLaw& law,
                               RngStream& rng) const {
    Panel panel(grid_, n_subjects);
    std::vector<double> phi(n_subjects);
    const double sd = std::sqrt(law.sigma2);
    for (auto& p : phi) p = law.mu + sd * rng.normal();

    const auto t = grid_.times();
    for (std::size_t i = 0; i < n_subjects; ++i) {
        auto row = panel.subject(i);
        for (std::size_t j = 0; j < t.size(); ++j) row[j] = t[j] * phi[i];
        if (source_ == NoiseSource::Zero) continue;
        const FbmPath w =
            source_ == NoiseSource::Exact ? sample_fbm_exact(*gram_, rng) : circulant_->sample(rng);
        for (std::size_t j = 0; j < t.size(); ++j) row[j] += w.values[j];
    }
    panel.set_true_effects(std::move(phi));
    return panel;
}

Panel simulate_panel(std::size_t n_subjects, const SamplingGrid& grid, Hurst h,
                     const EffectsLaw& law, RngStream& rng, NoiseSource source) {
    return PanelSimulator(grid, h, source).simulate(n_subjects, law, rng);
}

std::vector<double> transform_to_y(std::span<const double> times, std::span<const double> x,
                                   const std::function<double(double)>& drift) {
    if (times.size() != x.size()) throw DimensionError("times and states differ in length");
    if (times.size() < 2) throw DimensionError("trajectory needs the initial point and one observation");
    std::vector<double> y(times.size() - 1);
    double integral = 0.0;
    double a_prev = drift(x[0]);
    for (std::size_t j = 1; j < times.size(); ++j) {
        const double a_cur = drift(x[j]);
        integral += 0.5 * (times[j] - times[j - 1]) * (a_prev + a_cur);
        a_prev = a_cur;
        y[j - 1] = x[j] - x[0] - integral;
    }
    return y;
}

}  // namespace fbmre
