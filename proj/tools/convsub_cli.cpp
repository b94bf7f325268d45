// convsub command-line front end.
//
// Exit status: 0 success, 2 invalid arguments / configuration, 3 I/O or
// parse failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "convsub/bootstrap.hpp"
#include "convsub/convolution.hpp"
#include "convsub/experiment.hpp"
#include "convsub/independent.hpp"
#include "convsub/io.hpp"
#include "convsub/processes.hpp"
#include "convsub/spatial.hpp"
#include "convsub/subsampling.hpp"

namespace {

using namespace convsub;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string out;
    bool quiet = false;

    std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text;
    else
        io::write_text(g.out, text);
}

void emit_json(const Globals& g, const nlohmann::json& j) { emit(g, j.dump(2) + "\n"); }

void note(const Globals& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << "\n";
}

std::optional<std::size_t> parse_k(const std::string& k) {
    if (k == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(k, &pos);
        if (pos == k.size() && v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigInvalid, "--k must be a positive integer or 'auto', got '" + k + "'");
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::IoFailure:
    case ErrorCode::ParseFailure: return 3;
    default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subsampling, convolved subsampling and block bootstrap estimators for dependent data"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Root random seed");
    app.add_option("--out", g.out, "Output file (default: stdout)");
    app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");

    // generate
    auto* gen = app.add_subcommand("generate", "Simulate a series or lattice field");
    std::string process = "ar1";
    std::size_t gen_n = 1000;
    std::map<std::string, std::string> gen_keys;
    gen->add_option("--process", process, "ar1 | lrd | hetero | constant | apc | spatial-ma")->capture_default_str();
    gen->add_option("--n", gen_n, "Series length")->capture_default_str();
    for (const char* key : {"phi", "beta", "truncation", "sigma-eps", "mu", "variances", "innovation", "value", "base",
                            "amplitude", "period", "extent", "radius"}) {
        std::string name = key;
        gen->add_option_function<std::string>(
            "--" + name, [&gen_keys, name](const std::string& v) {
                std::string k = name;
                for (auto& c : k)
                    if (c == '-') c = '_';
                gen_keys[k] = v;
            },
            "Process parameter");
    }

    // subsample
    auto* sub = app.add_subcommand("subsample", "Overlapping-window subsampling estimate");
    std::string input, stat_label = "mean";
    std::size_t block = 0;
    double alpha = 1.0;
    sub->add_option("--input", input, "Series file, one value per line")->required();
    sub->add_option("--b", block, "Block length")->required();
    sub->add_option("--stat", stat_label, "mean | product | mean-equiv | variance")->capture_default_str();
    sub->add_option("--alpha", alpha, "Scaling exponent in (0, 1]")->capture_default_str();

    // subsample-spatial
    auto* spat = app.add_subcommand("subsample-spatial", "Lattice subsampling over rectangular templates");
    double lambda = 0.0, scale_b = 0.0;
    std::vector<double> region_half, template_half;
    spat->add_option("--input", input, "Field file")->required();
    spat->add_option("--lambda", lambda, "Region scale")->required();
    spat->add_option("--b", scale_b, "Template scale")->required();
    spat->add_option("--region-half", region_half, "R_0 half-widths (default 0.5 per axis)")->delimiter(',');
    spat->add_option("--template-half", template_half, "D_0 half-widths (default 0.5 per axis)")->delimiter(',');

    // id-subsample
    auto* ids = app.add_subcommand("id-subsample", "Subsampling over unordered subsets (independent data)");
    std::string mode = "exact";
    std::size_t mc_size = 100000;
    ids->add_option("--input", input, "Series file")->required();
    ids->add_option("--b", block, "Subset size")->required();
    ids->add_option("--mode", mode, "exact | mc")->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
    ids->add_option("--M", mc_size, "Monte Carlo subsets")->capture_default_str();
    ids->add_option("--stat", stat_label, "mean | product | mean-equiv | variance")->capture_default_str();
    ids->add_option("--alpha", alpha, "Scaling exponent in (0, 1]")->capture_default_str();

    // convolve
    auto* conv = app.add_subcommand("convolve", "k-fold convolved subsampling distribution");
    std::string est_path, method = "mc", k_text = "1";
    conv->add_option("--est", est_path, "Estimate JSON from subsample")->required();
    conv->add_option("--k", k_text, "Number of convolved draws")->required();
    conv->add_option("--method", method, "exact | mc")->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
    conv->add_option("--M", mc_size, "Monte Carlo replicates")->capture_default_str();

    // bootstrap
    auto* boot = app.add_subcommand("bootstrap", "Moving-block bootstrap of the sample mean");
    std::size_t reps = 100000;
    bool exact = false, unadjusted = false;
    k_text = "auto";
    boot->add_option("--input", input, "Series file")->required();
    boot->add_option("--b", block, "Block length")->required();
    boot->add_option("--k", k_text, "Blocks per resample, or auto = floor(n/b)")->capture_default_str();
    boot->add_option("--alpha", alpha, "Scaling exponent in (0, 1]")->capture_default_str();
    boot->add_option("--reps", reps, "Bootstrap replicates")->capture_default_str();
    boot->add_flag("--exact", exact, "Enumerate all block tuples instead of sampling");
    boot->add_flag("--unadjusted", unadjusted, "Drop the b^{(1-alpha)/2} long-memory adjustment");

    // compare
    auto* cmp = app.add_subcommand("compare", "KS, Mallows d2 and moment differences of two distributions");
    std::string path_a, path_b;
    cmp->add_option("a", path_a, "First distribution file")->required();
    cmp->add_option("b", path_b, "Second distribution file")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run a replication study from a config file");
    std::string config_path;
    sim->add_option("--config", config_path, "Key-value or JSON experiment config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (*seed_opt) g.seed = seed_value;

    try {
        if (*gen) {
            auto keys = gen_keys;
            keys["kind"] = process == "spatial-ma" ? "spatial_ma" : process;
            const ProcessSpec spec = process_from_keys(keys);
            Rng rng(g.seed_or(0));
            if (auto* ma = std::get_if<SpatialMAProcess>(&spec)) {
                emit(g, io::format_field(generate_field(*ma, rng)));
            } else {
                emit(g, io::format_series(generate_series(spec, gen_n, rng)));
            }
        } else if (*sub) {
            const Vector series = io::read_series(input);
            const auto est = subsample_estimate(series, block, Statistic::from_label(stat_label), ScalingLaw(alpha));
            emit_json(g, io::estimate_to_json(est));
            note(g, "n = " + std::to_string(est.n) + ", b = " + std::to_string(est.b) + ", var_sub = " + io::format_double(est.var_sub));
        } else if (*spat) {
            const LatticeField field = io::read_field(input);
            RectGeometry geom = RectGeometry::cube(field.dim(), lambda, scale_b);
            if (!region_half.empty()) geom.region_half = region_half;
            if (!template_half.empty()) geom.template_half = template_half;
            emit_json(g, io::estimate_to_json(spatial_subsample_estimate(field, geom)));
        } else if (*ids) {
            const Vector series = io::read_series(input);
            const auto m = mode == "exact" ? SubsetSamplerMode::exact() : SubsetSamplerMode::monte_carlo(mc_size, g.seed_or(0));
            const auto est = id_subsample_estimate(series, block, Statistic::from_label(stat_label), ScalingLaw(alpha), m);
            auto j = io::estimate_to_json(est);
            j["kind"] = "id-subsampling";
            j["mode"] = mode;
            emit_json(g, j);
        } else if (*conv) {
            const auto est = io::estimate_from_json(io::read_json(est_path));
            const auto k = parse_k(k_text);
            if (!k) throw Error(ErrorCode::ConfigInvalid, "convolve needs an explicit --k");
            const auto result = method == "exact" ? convolve_exact(est, *k) : convolve_mc(est, *k, mc_size, g.seed_or(0));
            if (result.variance_flagged) note(g, "warning: " + result.diagnostic);
            note(g, "m_sub * sqrt(k) = " + io::format_double(result.m_sub * std::sqrt(static_cast<double>(*k))));
            emit_json(g, io::convolved_to_json(result));
        } else if (*boot) {
            const Vector series = io::read_series(input);
            const auto spec = make_bootstrap_spec(static_cast<std::size_t>(series.size()), block, parse_k(k_text), alpha);
            const auto scaling = unadjusted ? BootstrapScaling::Unadjusted : BootstrapScaling::Corrected;
            const auto dist = exact ? mbb_exact(series, spec, scaling) : mbb_distribution(series, spec, reps, g.seed_or(0), scaling);
            auto j = io::distribution_to_json(dist, "block-bootstrap");
            j["b"] = spec.b;
            j["k"] = spec.k;
            j["alpha"] = spec.alpha;
            j["scaling"] = unadjusted ? "unadjusted" : "corrected";
            j["method"] = exact ? "exact" : "mc";
            emit_json(g, j);
        } else if (*cmp) {
            emit_json(g, to_json(compare(path_a, path_b)));
        } else if (*sim) {
            ExperimentConfig config = load_config(config_path);
            if (g.seed) config.seed = *g.seed;
            if (!g.out.empty()) {
                config.csv_path = g.out + ".csv";
                config.summary_path = g.out + ".summary.json";
            }
            const auto report = run_experiment(config);
            if (config.csv_path.empty()) std::cout << report.csv_header << "\n" << report.csv_body;
            if (!g.quiet) std::cerr << report.summary.dump(2) << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
    return 0;
}
