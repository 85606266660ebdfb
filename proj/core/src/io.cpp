#include "fbmre/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace fbmre {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::uint64_t parse_unsigned(std::string_view text, std::size_t line) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw FormatError(line, "expected a nonnegative integer, got '" + std::string(text) + "'");
    return v;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

FormatError::FormatError(std::size_t line, const std::string& what)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_real(std::string_view text, std::size_t line) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw FormatError(line, "expected a real number, got '" + std::string(text) + "'");
    return v;
}

void write_panel_csv(std::ostream& os, const Panel& panel) {
    os << "subject,t,y\n";
    const auto t = panel.grid().times();
    for (std::size_t i = 0; i < panel.n_subjects(); ++i) {
        const auto row = panel.subject(i);
        for (std::size_t j = 0; j < t.size(); ++j)
            os << (i + 1) << ',' << format_real(t[j]) << ',' << format_real(row[j]) << '\n';
    }
}

Panel read_panel_csv(std::istream& is) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(is, line) || trim(line) != "subject,t,y")
        throw FormatError(1, "expected header 'subject,t,y'");

    std::vector<std::uint64_t> ids;
    std::vector<std::vector<double>> times;
    std::vector<std::vector<double>> values;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw FormatError(lineno, "expected 3 columns subject,t,y");
        const auto id = parse_unsigned(cols[0], lineno);
        const double t = parse_real(cols[1], lineno);
        const double y = parse_real(cols[2], lineno);
        if (ids.empty() || ids.back() != id) {
            if (!ids.empty() && id < ids.back())
                throw FormatError(lineno, "rows must be sorted by subject");
            ids.push_back(id);
            times.emplace_back();
            values.emplace_back();
        } else if (!(t > times.back().back())) {
            throw GridMismatchError("line " + std::to_string(lineno) +
                                    ": times must be strictly increasing within a subject");
        }
        times.back().push_back(t);
        values.back().push_back(y);
    }
    if (ids.empty()) throw FormatError(lineno, "panel file has no data rows");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] != times[0])
            throw GridMismatchError("subject " + std::to_string(ids[i]) +
                                    " does not share the time column of subject " +
                                    std::to_string(ids[0]));
    }
    try {
        return Panel(SamplingGrid(times[0]), std::move(values));
    } catch (const RangeError& e) {
        throw GridMismatchError(std::string("invalid time column: ") + e.what());
    }
}

VariationFilter parse_filter_spec(std::string_view spec) {
    spec = trim(spec);
    if (spec == "diff2") return diff2_filter();
    if (spec == "diff3") return diff3_filter();
    std::vector<double> coeffs;
    for (auto part : split(spec, ',')) {
        try {
            coeffs.push_back(parse_real(part));
        } catch (const FormatError&) {
            throw FormatError(0, "unknown filter '" + std::string(spec) +
                                     "' (use diff2, diff3 or comma-separated coefficients)");
        }
    }
    return validate_filter(std::move(coeffs));
}

std::string filter_to_string(const VariationFilter& f) {
    std::string out;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i) out += ',';
        out += format_real(f.coeffs()[i]);
    }
    return out;
}

std::string noise_source_name(NoiseSource s) {
    switch (s) {
        case NoiseSource::Exact: return "exact";
        case NoiseSource::Circulant: return "circulant";
        case NoiseSource::Auto: return "auto";
        case NoiseSource::Zero: return "zero";
    }
    return "exact";
}

ExperimentConfig parse_experiment_config(std::istream& is) {
    static const std::set<std::string, std::less<>> kKnown{
        "h_list", "n_subjects_list", "n_obs_list", "T",       "mu0",     "sigma20",
        "replications", "k",         "filter",     "base_seed", "estimate_hurst",
        "sampler", "threads"};
    static const std::vector<std::string> kRequired{"h_list", "n_subjects_list", "n_obs_list",
                                                    "T",      "mu0",             "sigma20",
                                                    "replications"};

    std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw FormatError(lineno, "expected 'key = value'");
        const std::string key(trim(view.substr(0, eq)));
        const std::string value(trim(view.substr(eq + 1)));
        if (!kKnown.contains(key)) throw FormatError(lineno, "unknown key '" + key + "'");
        if (value.empty()) throw FormatError(lineno, "empty value for '" + key + "'");
        if (entries.contains(key)) throw FormatError(lineno, "duplicate key '" + key + "'");
        entries.emplace(key, std::make_pair(value, lineno));
    }
    for (const auto& key : kRequired)
        if (!entries.contains(key))
            throw FormatError(0, "missing required key '" + key + "'");

    ExperimentConfig cfg;
    auto get = [&](std::string_view key) -> const std::pair<std::string, std::size_t>& {
        return entries.find(key)->second;
    };
    auto reals = [&](std::string_view key) {
        const auto& [text, ln] = get(key);
        std::vector<double> out;
        for (auto part : split(text, ',')) out.push_back(parse_real(part, ln));
        return out;
    };
    auto counts = [&](std::string_view key) {
        const auto& [text, ln] = get(key);
        std::vector<std::size_t> out;
        for (auto part : split(text, ',')) out.push_back(parse_unsigned(part, ln));
        return out;
    };
    auto real = [&](std::string_view key) { return parse_real(get(key).first, get(key).second); };

    cfg.h_list = reals("h_list");
    cfg.n_subjects_list = counts("n_subjects_list");
    cfg.n_obs_list = counts("n_obs_list");
    cfg.horizon = real("T");
    cfg.mu0 = real("mu0");
    cfg.sigma20 = real("sigma20");
    cfg.replications = parse_unsigned(get("replications").first, get("replications").second);
    if (entries.contains("k")) cfg.k = real("k");
    if (entries.contains("base_seed"))
        cfg.base_seed = parse_unsigned(get("base_seed").first, get("base_seed").second);
    if (entries.contains("threads"))
        cfg.threads = parse_unsigned(get("threads").first, get("threads").second);
    if (entries.contains("filter")) {
        try {
            cfg.filter = parse_filter_spec(get("filter").first);
        } catch (const Error& e) {
            throw FormatError(get("filter").second, e.what());
        }
    }
    if (entries.contains("estimate_hurst")) {
        const auto& [text, ln] = get("estimate_hurst");
        if (text == "true" || text == "1")
            cfg.estimate_hurst = true;
        else if (text == "false" || text == "0")
            cfg.estimate_hurst = false;
        else
            throw FormatError(ln, "estimate_hurst must be true or false");
    }
    if (entries.contains("sampler")) {
        const auto& [text, ln] = get("sampler");
        if (text == "exact")
            cfg.sampler = NoiseSource::Exact;
        else if (text == "circulant")
            cfg.sampler = NoiseSource::Circulant;
        else if (text == "auto")
            cfg.sampler = NoiseSource::Auto;
        else
            throw FormatError(ln, "sampler must be exact, circulant or auto");
    }
    try {
        cfg.validate();
    } catch (const RangeError& e) {
        throw FormatError(0, e.what());
    }
    return cfg;
}

std::map<std::string, std::string> config_entries(const ExperimentConfig& cfg) {
    auto join = [](const auto& xs) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ',';
            if constexpr (std::is_floating_point_v<std::decay_t<decltype(xs[i])>>)
                out += format_real(xs[i]);
            else
                out += std::to_string(xs[i]);
        }
        return out;
    };
    return {
        {"h_list", join(cfg.h_list)},
        {"n_subjects_list", join(cfg.n_subjects_list)},
        {"n_obs_list", join(cfg.n_obs_list)},
        {"T", format_real(cfg.horizon)},
        {"mu0", format_real(cfg.mu0)},
        {"sigma20", format_real(cfg.sigma20)},
        {"replications", std::to_string(cfg.replications)},
        {"k", format_real(cfg.k)},
        {"filter", filter_to_string(cfg.filter)},
        {"base_seed", std::to_string(cfg.base_seed)},
        {"estimate_hurst", cfg.estimate_hurst ? "true" : "false"},
        {"sampler", noise_source_name(cfg.sampler)},
        {"threads", std::to_string(cfg.threads)},
    };
}

void write_histogram_svg(std::ostream& os, const Histogram& hist, const std::string& title,
                         const std::string& x_label) {
    constexpr double kWidth = 640, kHeight = 420;
    constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const std::size_t bins = hist.counts.size();
    const std::size_t max_count =
        bins ? std::max<std::size_t>(1, *std::max_element(hist.counts.begin(), hist.counts.end())) : 1;

    auto px = [&](double frac) { return kLeft + frac * plot_w; };
    auto py = [&](double count) { return kTop + plot_h * (1.0 - count / static_cast<double>(max_count)); };
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(4);
        s << v;
        return s.str();
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << xml_escape(title) << "</text>\n";

    const double bar_w = bins ? plot_w / static_cast<double>(bins) : plot_w;
    for (std::size_t b = 0; b < bins; ++b) {
        const double x = px(static_cast<double>(b) / static_cast<double>(bins));
        const double y = py(static_cast<double>(hist.counts[b]));
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\""
           << (kTop + plot_h - y) << "\" fill=\"#bbbbbb\" stroke=\"#444444\"/>\n";
    }
    if (bins) {
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
        for (std::size_t b = 0; b < bins; ++b) {
            const double x = px((static_cast<double>(b) + 0.5) / static_cast<double>(bins));
            os << x << ',' << py(static_cast<double>(hist.counts[b])) << ' ';
        }
        os << "\"/>\n";
    }

    // Axes with end ticks.
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
       << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kTop + plot_h << "\" stroke=\"black\"/>\n";
    if (!hist.edges.empty()) {
        for (double frac : {0.0, 0.5, 1.0}) {
            const double v = hist.edges.front() + frac * (hist.edges.back() - hist.edges.front());
            os << "<text x=\"" << px(frac) << "\" y=\"" << kTop + plot_h + 18
               << "\" text-anchor=\"middle\" font-size=\"12\">" << num(v) << "</text>\n";
        }
    }
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 4
       << "\" text-anchor=\"end\" font-size=\"12\">" << max_count << "</text>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + plot_h
       << "\" text-anchor=\"end\" font-size=\"12\">0</text>\n";
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
       << "\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << kTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
       << kTop + plot_h / 2 << ")\">frequency</text>\n";
    os << "</svg>\n";
}

}  // namespace fbmre
