#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cli/result_json.hpp"
#include "fbmre/effects.hpp"
#include "fbmre/errors.hpp"
#include "fbmre/hurst.hpp"
#include "fbmre/io.hpp"
#include "fbmre/mc_harness.hpp"
#include "fbmre/panel_model.hpp"

namespace fbmre::cli {

namespace {

namespace fs = std::filesystem;

/// Validation failure of a named flag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateOptions {
    double hurst = 0.0;
    std::size_t subjects = 0;
    std::size_t n_obs = 0;
    double horizon = 0.0;
    double mu = 0.0;
    double sigma2 = 0.0;
    std::uint64_t seed = 0;
    std::string sampler = "auto";
    std::string out;
};

struct HurstOptions {
    std::string input;
    std::size_t subject = 1;
    double k = 2.0;
    std::string filter = "diff2";
};

struct EffectsOptions {
    std::string input;
    double hurst = 0.0;
    double level = 0.95;
};

struct ExperimentOptions {
    std::string config;
    std::string out;
    std::size_t threads = 0;  // 0: keep the config value
};

void require(bool ok, const std::string& flag, const std::string& what) {
    if (!ok) throw UsageError(flag + ": " + what);
}

void check_hurst_flag(double h) {
    require(h >= GramMatrix::kMinHurst && h <= GramMatrix::kMaxHurst, "--hurst",
            "must lie in [0.01, 0.99], got " + format_real(h));
}

Panel load_panel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("--input: cannot open '" + path + "'");
    return read_panel_csv(in);
}

std::string file_label(double h) {
    return format_real(h);
}

int cmd_simulate(const SimulateOptions& o, std::ostream& err) {
    check_hurst_flag(o.hurst);
    require(o.subjects >= 1, "--subjects", "must be >= 1");
    require(o.n_obs >= 1, "--n-obs", "must be >= 1");
    require(o.horizon > 0.0 && std::isfinite(o.horizon), "--horizon", "must be positive");
    require(std::isfinite(o.mu), "--mu", "must be finite");
    require(o.sigma2 >= 0.0 && std::isfinite(o.sigma2), "--sigma2", "must be >= 0");
    NoiseSource source = NoiseSource::Auto;
    if (o.sampler == "exact")
        source = NoiseSource::Exact;
    else if (o.sampler == "circulant")
        source = NoiseSource::Circulant;
    else
        require(o.sampler == "auto", "--sampler", "must be auto, exact or circulant");

    const auto grid = SamplingGrid::uniform(o.n_obs, o.horizon);
    Panel panel = [&] {
        try {
            RngStream rng(o.seed, 0);
            return simulate_panel(o.subjects, grid, Hurst(o.hurst), EffectsLaw(o.mu, o.sigma2), rng,
                                  source);
        } catch (const Error& e) {
            throw std::runtime_error(std::string("simulation failed: ") + e.what());
        }
    }();

    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
        err << "error: --out: cannot write '" << o.out << "'\n";
        return kOutput;
    }
    write_panel_csv(file, panel);
    file.close();
    if (!file) {
        err << "error: --out: write to '" << o.out << "' failed\n";
        return kOutput;
    }
    err << "seed " << o.seed << "; grid t_j = j*" << format_real(o.horizon) << "/" << o.n_obs
        << " (" << format_real(grid[0]) << " .. " << format_real(grid.horizon()) << ")\n";
    return kOk;
}

int cmd_hurst(const HurstOptions& o, std::ostream& out) {
    VariationFilter filter = [&] {
        try {
            return parse_filter_spec(o.filter);
        } catch (const Error& e) {
            throw UsageError(std::string("--filter: ") + e.what());
        }
    }();
    require(o.k > 0.0 && std::isfinite(o.k), "--k", "must be positive");
    const Panel panel = load_panel(o.input);
    require(o.subject >= 1 && o.subject <= panel.n_subjects(), "--subject",
            "must lie in [1, " + std::to_string(panel.n_subjects()) + "]");
    if (!panel.grid().is_uniform())
        throw GridMismatchError("Hurst estimation needs a uniform grid t_j = jT/n");
    const auto est = estimate_h(panel.subject(o.subject - 1), panel.grid().horizon(), o.k, filter);
    auto doc = to_json(est);
    doc["kind"] = "hurst";
    doc["subject"] = o.subject;
    doc["horizon"] = panel.grid().horizon();
    out << doc.dump(2) << '\n';
    return kOk;
}

int cmd_effects(const EffectsOptions& o, std::ostream& out) {
    check_hurst_flag(o.hurst);
    require(o.level >= 0.0 && o.level < 1.0, "--level",
            "must lie in [0, 1), got " + format_real(o.level));
    const Panel panel = load_panel(o.input);
    const GramMatrix gram(panel.grid(), Hurst(o.hurst));
    const auto est = estimate_effects(panel, gram);
    auto doc = to_json(est);
    doc["kind"] = "effects";
    doc["hurst"] = o.hurst;
    doc["n_obs"] = panel.n_obs();
    doc["exact_std"]["mean_sigma2"] = exact_moments(est.sigma2_hat, est.n_subjects, est.q).mean_sigma2;
    doc["confidence_intervals"] = to_json(confidence_intervals(est, o.level));
    out << doc.dump(2) << '\n';
    return kOk;
}

int cmd_experiment(const ExperimentOptions& o, std::ostream& err) {
    ExperimentConfig cfg = [&] {
        std::ifstream in(o.config);
        if (!in) throw UsageError("--config: cannot open '" + o.config + "'");
        try {
            return parse_experiment_config(in);
        } catch (const FormatError& e) {
            throw UsageError("--config: " + std::string(e.what()));
        }
    }();
    if (o.threads != 0) cfg.threads = o.threads;

    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    {
        std::ofstream probe(dir / "manifest.json");
        if (ec || !probe) {
            err << "error: --out: directory '" << o.out << "' is not writable\n";
            return kOutput;
        }
    }

    std::vector<CellSummary> cells;
    try {
        cells = run_experiment(cfg);
    } catch (const CellError& e) {
        err << "error: " << e.what() << '\n';
        return kSimulation;
    }

    bool write_ok = true;
    auto open = [&](const fs::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) write_ok = false;
        return f;
    };
    for (auto n_obs : cfg.n_obs_list) {
        auto f = open(dir / ("table_n" + std::to_string(n_obs) + ".csv"));
        f << "H,N,mean_mu,exact_std_mu,emp_std_mu,mean_sigma2,exact_std_sigma2,emp_std_sigma2\n";
        for (const auto& c : cells) {
            if (c.n_obs != n_obs) continue;
            f << format_real(c.h) << ',' << c.n_subjects << ',' << format_real(c.mean_mu_hat) << ','
              << format_real(c.exact_std_mu) << ',' << format_real(c.emp_std_mu) << ','
              << format_real(c.mean_sigma2_hat) << ',' << format_real(c.exact_std_sigma2) << ','
              << format_real(c.emp_std_sigma2) << '\n';
        }
    }
    for (const auto& c : cells) {
        const std::string stem = "hist_" + file_label(c.h) + "_" + std::to_string(c.n_subjects) +
                                 "_" + std::to_string(c.n_obs) + "_";
        const std::string caption = " (H=" + file_label(c.h) + ", N=" +
                                    std::to_string(c.n_subjects) + ", n=" +
                                    std::to_string(c.n_obs) + ")";
        {
            auto f = open(dir / (stem + "mu.svg"));
            write_histogram_svg(f, c.hist_mu, "mu estimates" + caption, "mu_hat");
        }
        if (!c.hist_sigma2.counts.empty()) {
            auto f = open(dir / (stem + "sigma2.svg"));
            write_histogram_svg(f, c.hist_sigma2, "sigma2 estimates" + caption, "sigma2_hat");
        }
        if (c.hurst && !c.hurst->histogram.counts.empty()) {
            auto f = open(dir / (stem + "hurst.svg"));
            write_histogram_svg(f, c.hurst->histogram, "Hurst estimates" + caption, "H_hat");
        }
    }
    nlohmann::json manifest;
    manifest["kind"] = "experiment";
    manifest["config"] = config_entries(cfg);
    manifest["base_seed"] = cfg.base_seed;
    manifest["cells"] = nlohmann::json::array();
    for (const auto& c : cells) manifest["cells"].push_back(to_json(c));
    {
        auto f = open(dir / "manifest.json");
        f << manifest.dump(2) << '\n';
    }
    if (!write_ok) {
        err << "error: --out: failed writing into '" << o.out << "'\n";
        return kOutput;
    }
    err << "wrote " << cells.size() << " cells to " << o.out << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional diffusion with random effects: simulation and estimation"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a random-effects panel to CSV");
    simulate->add_option("--hurst", sim.hurst, "Hurst index H")->required();
    simulate->add_option("--subjects", sim.subjects, "Number of subjects N")->required();
    simulate->add_option("--n-obs", sim.n_obs, "Observations per subject n")->required();
    simulate->add_option("--horizon", sim.horizon, "Horizon T")->required();
    simulate->add_option("--mu", sim.mu, "Effects mean")->required();
    simulate->add_option("--sigma2", sim.sigma2, "Effects variance")->required();
    simulate->add_option("--seed", sim.seed, "Random seed")->required();
    simulate->add_option("--sampler", sim.sampler, "auto | exact | circulant")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output CSV path")->required();

    HurstOptions hur;
    auto* hurst = app.add_subcommand("hurst", "Estimate H from one subject of a panel");
    hurst->add_option("--input", hur.input, "Panel CSV")->required();
    hurst->add_option("--subject", hur.subject, "1-based subject index")->capture_default_str();
    hurst->add_option("--k", hur.k, "Variation power k")->capture_default_str();
    hurst->add_option("--filter", hur.filter, "diff2 | diff3 | comma-separated coefficients")
        ->capture_default_str();

    EffectsOptions eff;
    auto* effects = app.add_subcommand("effects", "Estimate (mu, sigma2) given H");
    effects->add_option("--input", eff.input, "Panel CSV")->required();
    effects->add_option("--hurst", eff.hurst, "Known Hurst index")->required();
    effects->add_option("--level", eff.level, "Confidence level")->capture_default_str();

    ExperimentOptions exp;
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment grid");
    experiment->add_option("--config", exp.config, "Config file (key = value)")->required();
    experiment->add_option("--out", exp.out, "Output directory")->required();
    experiment->add_option("--threads", exp.threads, "Override the config thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim, err);
        if (*hurst) return cmd_hurst(hur, out);
        if (*effects) return cmd_effects(eff, out);
        if (*experiment) return cmd_experiment(exp, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const OrderTooLowError& e) {
        err << "error: --filter: " << e.what() << '\n';
        return kUsage;
    } catch (const FormatError& e) {
        err << "error: --input: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kEstimation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return *simulate ? kSimulation : kEstimation;
    }
    return kUsage;
}

}  // namespace fbmre::cli
