#include "convsub/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "convsub/bootstrap.hpp"
#include "convsub/convolution.hpp"
#include "convsub/independent.hpp"
#include "convsub/io.hpp"
#include "convsub/parallel.hpp"
#include "convsub/spatial.hpp"
#include "convsub/subsampling.hpp"

namespace convsub {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
    throw Error(ErrorCode::ConfigInvalid, field + ": " + reason);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& field) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) invalid(field, "'" + s + "' is not a finite real");
    return v;
}

std::uint64_t to_u64(const std::string& s, const std::string& field) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) invalid(field, "'" + s + "' is not a non-negative integer");
    return v;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

template <class T, class F>
std::string join_map(const std::vector<T>& items, F f) {
    std::vector<std::string> s;
    for (const auto& x : items) s.push_back(f(x));
    return join(s);
}

/// Consumes keys from one section, so leftovers can be reported as unknown.
class Reader {
public:
    Reader(const KeyValues& kv, std::string section) : kv_(kv), section_(std::move(section)) {}

    std::optional<std::string> take(const std::string& key) {
        used_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        return it->second;
    }
    std::string field(const std::string& key) const { return section_ + "." + key; }
    std::string need(const std::string& key) {
        auto v = take(key);
        if (!v) invalid(field(key), "missing");
        return *v;
    }
    double real(const std::string& key, double fallback) {
        auto v = take(key);
        return v ? to_double(*v, field(key)) : fallback;
    }
    std::optional<double> opt_real(const std::string& key) {
        auto v = take(key);
        if (!v) return std::nullopt;
        return to_double(*v, field(key));
    }
    std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
        auto v = take(key);
        return v ? to_u64(*v, field(key)) : fallback;
    }
    void finish() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) invalid(field(k), "unknown key");
    }

private:
    const KeyValues& kv_;
    std::string section_;
    std::set<std::string> used_;
};

Innovation parse_innovation(const std::optional<std::string>& s, const std::string& field) {
    if (!s || *s == "gaussian") return Innovation::Gaussian;
    if (*s == "exponential") return Innovation::Exponential;
    invalid(field, "innovation must be gaussian or exponential");
}

const char* innovation_name(Innovation i) { return i == Innovation::Gaussian ? "gaussian" : "exponential"; }

BaseProcess parse_base(const std::string& kind, Reader& r) {
    if (kind == "ar1") {
        AR1Process p;
        p.phi = r.real("phi", 0.0);
        p.sigma_eps = r.real("sigma_eps", 1.0);
        p.innovation = parse_innovation(r.take("innovation"), r.field("innovation"));
        return p;
    }
    if (kind == "lrd") {
        LinearLRDProcess p;
        p.beta = r.real("beta", p.beta);
        p.truncation = r.integer("truncation", p.truncation);
        p.sigma_eps = r.real("sigma_eps", 1.0);
        p.mu = r.real("mu", 0.0);
        p.innovation = parse_innovation(r.take("innovation"), r.field("innovation"));
        return p;
    }
    if (kind == "hetero") {
        HeteroIndepProcess p;
        p.mu = r.real("mu", 0.0);
        if (auto v = r.take("variances")) {
            p.variances.clear();
            for (const auto& item : split_list(*v)) p.variances.push_back(to_double(item, r.field("variances")));
        }
        p.innovation = parse_innovation(r.take("innovation"), r.field("innovation"));
        return p;
    }
    if (kind == "constant") return ConstantProcess{r.real("value", 0.0)};
    invalid(r.field("kind"), "unknown process kind '" + kind + "'");
}

void base_to_keys(const BaseProcess& base, KeyValues& kv, const std::string& kind_key) {
    using io::format_double;
    if (auto* p = std::get_if<AR1Process>(&base)) {
        kv[kind_key] = "ar1";
        kv["phi"] = format_double(p->phi);
        kv["sigma_eps"] = format_double(p->sigma_eps);
        kv["innovation"] = innovation_name(p->innovation);
    } else if (auto* q = std::get_if<LinearLRDProcess>(&base)) {
        kv[kind_key] = "lrd";
        kv["beta"] = format_double(q->beta);
        kv["truncation"] = std::to_string(q->truncation);
        kv["sigma_eps"] = format_double(q->sigma_eps);
        kv["mu"] = format_double(q->mu);
        kv["innovation"] = innovation_name(q->innovation);
    } else if (auto* h = std::get_if<HeteroIndepProcess>(&base)) {
        kv[kind_key] = "hetero";
        kv["mu"] = format_double(h->mu);
        kv["variances"] = join_map(h->variances, [](double v) { return format_double(v); });
        kv["innovation"] = innovation_name(h->innovation);
    } else {
        kv[kind_key] = "constant";
        kv["value"] = format_double(std::get<ConstantProcess>(base).value);
    }
}

std::uint64_t tag(const char* s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 1099511628211ULL;
    return h;
}

struct Cell {
    std::size_t n, b, k;
    bool k_auto;
};

}  // namespace

const char* metric_name(Metric m) {
    switch (m) {
    case Metric::KsSub: return "ks_sub";
    case Metric::KsConv: return "ks_conv";
    case Metric::KsBoot: return "ks_boot";
    case Metric::VarSub: return "var_sub";
    case Metric::MeanSub: return "mean_sub";
    case Metric::SkewSub: return "skew_sub";
    case Metric::SkewConv: return "skew_conv";
    case Metric::TruncMoment: return "trunc_moment";
    case Metric::D2Gap: return "d2_gap";
    case Metric::MsubRootK: return "msub_rootk";
    }
    return "?";
}

Metric metric_from_name(const std::string& name) {
    for (Metric m : {Metric::KsSub, Metric::KsConv, Metric::KsBoot, Metric::VarSub, Metric::MeanSub, Metric::SkewSub,
                     Metric::SkewConv, Metric::TruncMoment, Metric::D2Gap, Metric::MsubRootK})
        if (name == metric_name(m)) return m;
    invalid("run.metrics", "unknown metric '" + name + "'");
}

Sections parse_sections(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') invalid(where, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) invalid(where, "empty section name");
            if (out.count(section)) invalid(where, "duplicate section [" + section + "]");
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) invalid(where, "expected 'key = value'");
        if (section.empty()) invalid(where, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) invalid(where, "empty key");
        if (!out[section].emplace(key, trim(line.substr(eq + 1))).second) invalid(section + "." + key, "duplicate key");
    }
    return out;
}

ProcessSpec process_from_keys(const KeyValues& keys) {
    Reader r(keys, "process");
    const std::string kind = r.need("kind");
    ProcessSpec spec;
    if (kind == "apc") {
        APCProcess p;
        p.base = parse_base(r.need("base"), r);
        p.amplitude = r.real("amplitude", 1.0);
        p.period = static_cast<long>(r.integer("period", 7));
        spec = p;
    } else if (kind == "spatial_ma") {
        SpatialMAProcess p;
        if (auto e = r.take("extent")) {
            for (const auto& item : split_list(*e)) p.extent.push_back(to_u64(item, r.field("extent")));
        } else {
            p.extent.assign(r.integer("dim", 2), 1);
        }
        if (auto d = r.take("dim"); d && to_u64(*d, r.field("dim")) != p.extent.size())
            invalid(r.field("dim"), "does not match extent");
        p.radius = static_cast<long>(r.integer("radius", 0));
        p.sigma_eps = r.real("sigma_eps", 1.0);
        spec = p;
    } else {
        std::visit([&](auto&& base) { spec = base; }, parse_base(kind, r));
    }
    r.finish();
    try {
        validate(spec);
    } catch (const Error& e) {
        invalid("process", e.what());
    }
    return spec;
}

KeyValues process_to_keys(const ProcessSpec& spec) {
    KeyValues kv;
    if (auto* apc = std::get_if<APCProcess>(&spec)) {
        base_to_keys(apc->base, kv, "base");
        kv["kind"] = "apc";
        kv["amplitude"] = io::format_double(apc->amplitude);
        kv["period"] = std::to_string(apc->period);
    } else if (auto* ma = std::get_if<SpatialMAProcess>(&spec)) {
        kv["kind"] = "spatial_ma";
        kv["dim"] = std::to_string(ma->extent.size());
        kv["extent"] = join_map(ma->extent, [](std::size_t e) { return std::to_string(e); });
        kv["radius"] = std::to_string(ma->radius);
        kv["sigma_eps"] = io::format_double(ma->sigma_eps);
    } else {
        std::visit(
            [&](auto&& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (!std::is_same_v<T, APCProcess> && !std::is_same_v<T, SpatialMAProcess>)
                    base_to_keys(BaseProcess(p), kv, "kind");
            },
            spec);
    }
    return kv;
}

namespace {

ExperimentConfig config_from_sections(const Sections& sections) {
    static const std::set<std::string> known{"process", "estimator", "grid.n", "grid.b", "grid.k", "run", "output"};
    for (const auto& [name, kv] : sections)
        if (!known.count(name)) invalid("[" + name + "]", "unknown section");
    const KeyValues empty;
    auto section = [&](const std::string& name) -> const KeyValues& {
        auto it = sections.find(name);
        return it == sections.end() ? empty : it->second;
    };

    ExperimentConfig c;
    if (!sections.count("process")) invalid("process", "missing section");
    c.process = process_from_keys(section("process"));

    Reader est(section("estimator"), "estimator");
    c.statistic = est.take("statistic").value_or("mean");
    c.alpha = est.real("alpha", 1.0);
    c.theta = est.opt_real("theta");
    est.finish();

    for (const char* axis : {"n", "b", "k"}) {
        const std::string name = std::string("grid.") + axis;
        Reader g(section(name), name);
        const auto items = split_list(g.need("values"));
        for (const auto& item : items) {
            if (*axis == 'k') {
                c.k.push_back(item == "auto" ? std::nullopt : std::optional<std::size_t>(to_u64(item, g.field("values"))));
            } else {
                (*axis == 'n' ? c.n : c.b).push_back(to_u64(item, g.field("values")));
            }
        }
        g.finish();
    }

    Reader run(section("run"), "run");
    c.reps = run.integer("reps", 1);
    c.seed = run.integer("seed", 0);
    for (const auto& m : split_list(run.need("metrics"))) c.metrics.push_back(metric_from_name(m));
    if (auto t = run.take("trunc_m"))
        for (const auto& item : split_list(*t)) c.trunc_m.push_back(to_double(item, run.field("trunc_m")));
    c.sigma2 = run.opt_real("sigma2");
    c.conv_mc = run.integer("conv_mc", c.conv_mc);
    c.boot_reps = run.integer("boot_reps", c.boot_reps);
    c.d2_reps = run.integer("d2_reps", c.d2_reps);
    c.workers = static_cast<unsigned>(run.integer("workers", 1));
    run.finish();

    Reader out(section("output"), "output");
    c.csv_path = out.take("csv").value_or("");
    c.summary_path = out.take("summary").value_or("");
    out.finish();

    validate(c);
    return c;
}

std::string json_scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::vector<std::string> items;
        for (const auto& x : v) items.push_back(json_scalar(x));
        return join(items);
    }
    if (v.is_number_float()) return io::format_double(v.get<double>());
    return v.dump();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) { return config_from_sections(parse_sections(text)); }

ExperimentConfig parse_config_json(const nlohmann::json& j) {
    if (!j.is_object()) invalid("config", "JSON config must be an object");
    Sections sections;
    for (const auto& [name, body] : j.items()) {
        if (!body.is_object()) invalid(name, "section must be an object");
        if (name == "grid") {
            for (const auto& [axis, values] : body.items()) sections["grid." + axis]["values"] = json_scalar(values);
            continue;
        }
        for (const auto& [key, value] : body.items()) sections[name][key] = json_scalar(value);
    }
    return config_from_sections(sections);
}

ExperimentConfig load_config(const std::string& path) {
    const std::string text = io::read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return parse_config_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            invalid(path, std::string("invalid JSON: ") + e.what());
        }
    }
    return parse_config(text);
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[process]\n";
    for (const auto& [k, v] : process_to_keys(c.process)) out << k << " = " << v << "\n";
    out << "\n[estimator]\nstatistic = " << c.statistic << "\nalpha = " << io::format_double(c.alpha) << "\n";
    if (c.theta) out << "theta = " << io::format_double(*c.theta) << "\n";
    auto size_str = [](std::size_t x) { return std::to_string(x); };
    out << "\n[grid.n]\nvalues = " << join_map(c.n, size_str) << "\n";
    out << "\n[grid.b]\nvalues = " << join_map(c.b, size_str) << "\n";
    out << "\n[grid.k]\nvalues = "
        << join_map(c.k, [](const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : std::string("auto"); })
        << "\n";
    out << "\n[run]\nreps = " << c.reps << "\nseed = " << c.seed
        << "\nmetrics = " << join_map(c.metrics, [](Metric m) { return std::string(metric_name(m)); }) << "\n";
    if (!c.trunc_m.empty()) out << "trunc_m = " << join_map(c.trunc_m, [](double m) { return io::format_double(m); }) << "\n";
    if (c.sigma2) out << "sigma2 = " << io::format_double(*c.sigma2) << "\n";
    out << "conv_mc = " << c.conv_mc << "\nboot_reps = " << c.boot_reps << "\nd2_reps = " << c.d2_reps
        << "\nworkers = " << c.workers << "\n";
    if (!c.csv_path.empty() || !c.summary_path.empty()) {
        out << "\n[output]\n";
        if (!c.csv_path.empty()) out << "csv = " << c.csv_path << "\n";
        if (!c.summary_path.empty()) out << "summary = " << c.summary_path << "\n";
    }
    return out.str();
}

void validate(const ExperimentConfig& c) {
    const bool spatial = is_spatial(c.process);
    if (c.reps < 1) invalid("run.reps", "must be >= 1");
    if (c.n.empty()) invalid("grid.n", "empty");
    if (c.b.empty()) invalid("grid.b", "empty");
    if (c.k.empty()) invalid("grid.k", "empty");
    if (c.metrics.empty()) invalid("run.metrics", "empty");
    if (std::set<Metric>(c.metrics.begin(), c.metrics.end()).size() != c.metrics.size())
        invalid("run.metrics", "duplicate metric");
    try {
        ScalingLaw law(c.alpha);
        (void)law;
        (void)Statistic::from_label(c.statistic);
    } catch (const Error& e) {
        invalid("estimator", e.what());
    }
    for (std::size_t n : c.n)
        for (std::size_t b : c.b) {
            // Keeps b^{-1} + b/n small: b in [2, n/4].
            if (b < 2 || 4 * b > n)
                invalid("grid.b", "b = " + std::to_string(b) + " outside [2, n/4] for n = " + std::to_string(n));
        }
    for (const auto& k : c.k)
        if (k && *k == 0) invalid("grid.k", "k must be positive or auto");
    const auto has = [&](Metric m) { return std::find(c.metrics.begin(), c.metrics.end(), m) != c.metrics.end(); };
    if ((has(Metric::KsSub) || has(Metric::KsConv) || has(Metric::KsBoot)) && !(c.sigma2 && *c.sigma2 > 0.0))
        invalid("run.sigma2", "KS metrics need a positive sigma2");
    if (has(Metric::TruncMoment)) {
        if (c.trunc_m.empty()) invalid("run.trunc_m", "trunc_moment needs at least one level");
        for (double m : c.trunc_m)
            if (!(m > 0.0)) invalid("run.trunc_m", "levels must be positive");
    }
    if (c.conv_mc < 1) invalid("run.conv_mc", "must be >= 1");
    if (c.boot_reps < 1) invalid("run.boot_reps", "must be >= 1");
    if (has(Metric::D2Gap) && c.d2_reps < 1000) invalid("run.d2_reps", "must be >= 1000");
    if (c.workers < 1) invalid("run.workers", "must be >= 1");
    if (c.statistic != "mean" && (has(Metric::KsBoot) || has(Metric::D2Gap)))
        invalid("run.metrics", "ks_boot and d2_gap are defined for the mean only");
    if (spatial) {
        if (c.statistic != "mean" || c.alpha != 1.0) invalid("estimator", "spatial runs use the mean with alpha = 1");
        if (has(Metric::KsBoot) || has(Metric::D2Gap)) invalid("run.metrics", "ks_boot and d2_gap need a time series");
        if (c.theta) invalid("estimator.theta", "not supported for spatial runs");
    }
}

std::vector<std::string> metric_columns(const ExperimentConfig& config) {
    std::vector<std::string> cols;
    for (Metric m : config.metrics) {
        if (m == Metric::TruncMoment) {
            for (double level : config.trunc_m) cols.push_back("trunc_m=" + io::format_double(level));
        } else {
            cols.push_back(metric_name(m));
        }
    }
    return cols;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    validate(config);
    const bool spatial = is_spatial(config.process);
    const Statistic stat = Statistic::from_label(config.statistic);
    const ScalingLaw law(config.alpha);

    std::vector<Cell> cells;
    for (std::size_t n : config.n)
        for (std::size_t b : config.b)
            for (const auto& k : config.k) {
                std::size_t resolved = 0;
                if (k) {
                    resolved = *k;
                } else if (spatial) {
                    const auto d = std::get<SpatialMAProcess>(config.process).extent.size();
                    resolved = static_cast<std::size_t>(std::pow(static_cast<double>(n / b), static_cast<double>(d)));
                } else {
                    resolved = n / b;
                }
                cells.push_back({n, b, std::max<std::size_t>(1, resolved), !k});
            }

    const auto cols = metric_columns(config);
    std::vector<std::vector<double>> rows(cells.size() * config.reps);
    const double sigma = config.sigma2 ? std::sqrt(*config.sigma2) : 1.0;

    parallel_for(rows.size(), config.workers, [&](std::size_t idx) {
        const Cell& cell = cells[idx / config.reps];
        const std::size_t rep = idx % config.reps;
        // Data depend on (n, rep) only; resampling streams on the full cell.
        Rng data_rng = Rng::substream(config.seed, mix64(tag("data") ^ cell.n), rep);
        const std::uint64_t cell_key = mix64(mix64(mix64(cell.n) ^ cell.b) ^ cell.k);
        auto stream = [&](const char* name) { return substream_seed(config.seed, cell_key ^ tag(name), rep); };

        Vector series;
        SubsamplingEstimate est;
        if (spatial) {
            auto ma = std::get<SpatialMAProcess>(config.process);
            ma.extent.assign(ma.extent.size(), cell.n);
            const LatticeField field = generate_field(ma, data_rng);
            est = spatial_subsample_estimate(
                field, RectGeometry::cube(ma.extent.size(), static_cast<double>(cell.n), static_cast<double>(cell.b)));
        } else {
            series = generate_series(config.process, cell.n, data_rng);
            est = subsample_estimate(series, cell.b, stat, law);
        }

        std::vector<double> row{static_cast<double>(rep), static_cast<double>(cell.n), static_cast<double>(cell.b),
                                static_cast<double>(cell.k)};
        const double root_k = std::sqrt(static_cast<double>(cell.k));
        for (Metric m : config.metrics) {
            switch (m) {
            case Metric::KsSub: row.push_back(ks_to_normal(est.distribution(), sigma)); break;
            case Metric::KsConv:
                row.push_back(ks_to_normal(convolve_mc(est, cell.k, config.conv_mc, stream("conv")).realization, sigma));
                break;
            case Metric::KsBoot: {
                const BootstrapSpec spec{cell.b, cell.k, config.alpha};
                row.push_back(ks_to_normal(mbb_distribution(series, spec, config.boot_reps, stream("boot")), sigma));
                break;
            }
            case Metric::VarSub: row.push_back(est.var_sub); break;
            case Metric::MeanSub: row.push_back(est.m_sub); break;
            case Metric::SkewSub: row.push_back(skewness(est.atoms)); break;
            case Metric::SkewConv: row.push_back(skewness(est.atoms) / root_k); break;
            case Metric::TruncMoment: {
                const Vector atoms =
                    config.theta ? oracle_centered_atoms(series, cell.b, stat, law, *config.theta) : est.atoms;
                for (double level : config.trunc_m) row.push_back(truncated_second_moment(atoms, level));
                break;
            }
            case Metric::D2Gap: row.push_back(d2_id_gap(series, cell.b, cell.k, config.d2_reps, stream("d2")).gap); break;
            case Metric::MsubRootK: row.push_back(est.m_sub * root_k); break;
            }
        }
        rows[idx] = std::move(row);
    });

    ExperimentReport report;
    report.columns = {"rep", "n", "b", "k"};
    report.columns.insert(report.columns.end(), cols.begin(), cols.end());
    report.csv_header = join(report.columns);
    report.csv_header.erase(std::remove(report.csv_header.begin(), report.csv_header.end(), ' '), report.csv_header.end());
    std::string body;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) body += ',';
            body += i < 4 ? std::to_string(static_cast<std::uint64_t>(row[i])) : io::format_double(row[i]);
        }
        body += '\n';
    }
    report.csv_body = std::move(body);

    nlohmann::json cells_json = nlohmann::json::array();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        nlohmann::json stats = nlohmann::json::object();
        for (std::size_t col = 0; col < cols.size(); ++col) {
            Vector v(static_cast<Eigen::Index>(config.reps));
            for (std::size_t r = 0; r < config.reps; ++r) v[static_cast<Eigen::Index>(r)] = rows[c * config.reps + r][4 + col];
            std::sort(v.begin(), v.end());
            const double mean = compensated_mean(v);
            const double sd = config.reps > 1 ? std::sqrt(central_moment(v, 2) * static_cast<double>(config.reps) /
                                                          static_cast<double>(config.reps - 1))
                                              : 0.0;
            stats[cols[col]] = {{"mean", mean},
                                {"sd", sd},
                                {"q05", io::quantile_sorted(v, 0.05)},
                                {"q25", io::quantile_sorted(v, 0.25)},
                                {"median", io::quantile_sorted(v, 0.5)},
                                {"q75", io::quantile_sorted(v, 0.75)},
                                {"q95", io::quantile_sorted(v, 0.95)}};
        }
        cells_json.push_back({{"n", cells[c].n},
                              {"b", cells[c].b},
                              {"k", cells[c].k},
                              {"k_auto", cells[c].k_auto},
                              {"reps", config.reps},
                              {"metrics", stats}});
    }
    report.summary = {{"columns", report.columns}, {"seed", config.seed}, {"cells", cells_json}};
    report.rows = std::move(rows);

    if (!config.csv_path.empty()) io::write_text(config.csv_path, report.csv_header + "\n" + report.csv_body);
    if (!config.summary_path.empty()) io::write_text(config.summary_path, report.summary.dump(2) + "\n");
    return report;
}

CompareResult compare(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return {ks_between(a, b), mallows_d2(a, b), b.mean() - a.mean(), central_moment(b, 2) - central_moment(a, 2),
            central_moment(b, 3) - central_moment(a, 3)};
}

CompareResult compare(const std::string& path_a, const std::string& path_b) {
    return compare(io::distribution_from_json(io::read_json(path_a)), io::distribution_from_json(io::read_json(path_b)));
}

nlohmann::json to_json(const CompareResult& r) {
    return {{"ks", r.ks},
            {"d2", r.d2},
            {"mean_delta", r.mean_delta},
            {"variance_delta", r.variance_delta},
            {"third_moment_delta", r.third_delta}};
}

}  // namespace convsub
