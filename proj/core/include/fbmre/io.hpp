#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fbmre/errors.hpp"
#include "fbmre/hurst.hpp"
#include "fbmre/mc_harness.hpp"
#include "fbmre/panel_model.hpp"

namespace fbmre {

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

/// Strict full-string parse; throws FormatError(line) on trailing junk.
double parse_real(std::string_view text, std::size_t line = 0);

// Panel CSV: header `subject,t,y`, one row per (subject, t) sorted by
// subject then t, subjects numbered 1..N, LF line endings.

void write_panel_csv(std::ostream& os, const Panel& panel);
/// Throws FormatError for malformed rows and GridMismatchError when the
/// subjects do not share one strictly increasing time column.
Panel read_panel_csv(std::istream& is);

/// `diff2`, `diff3`, or comma-separated coefficients. Unknown names throw
/// FormatError; valid vectors of order < 2 throw OrderTooLowError.
VariationFilter parse_filter_spec(std::string_view spec);
std::string filter_to_string(const VariationFilter& f);

// Experiment config: `key = value` lines, `#` comments, lists comma-separated.
// Required: h_list, n_subjects_list, n_obs_list, T, mu0, sigma20, replications.
// Optional: k, filter, base_seed, estimate_hurst, sampler, threads.

ExperimentConfig parse_experiment_config(std::istream& is);
/// Ordered key/value echo of a config, suitable for a manifest.
std::map<std::string, std::string> config_entries(const ExperimentConfig& cfg);

std::string noise_source_name(NoiseSource s);

/// Standalone SVG: histogram bars plus a frequency polygon through the bin
/// midpoints, with axis labels.
void write_histogram_svg(std::ostream& os, const Histogram& hist, const std::string& title,
                         const std::string& x_label);

}  // namespace fbmre
