#include "convsub/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace convsub::io {

namespace {

double parse_double(std::string_view token, const std::string& where) {
    // std::from_chars for double is available in libstdc++ 11.
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw Error(ErrorCode::ParseFailure, "cannot parse '" + std::string(token) + "' as a real number " + where);
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, "non-finite value " + where);
    return value;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

Vector parse_series(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        values.push_back(parse_double(view, "on line " + std::to_string(lineno)));
    }
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "series contains no values");
    return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector read_series(const std::string& path) { return parse_series(read_text(path)); }

std::string format_double(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string format_series(const VectorRef& series) {
    std::string out;
    for (Eigen::Index i = 0; i < series.size(); ++i) {
        out += format_double(series[i]);
        out += '\n';
    }
    return out;
}

void write_series(const std::string& path, const VectorRef& series) { write_text(path, format_series(series)); }

LatticeField parse_field(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    // Skip comment and blank lines before the header.
    do {
        if (!std::getline(in, header)) throw Error(ErrorCode::ParseFailure, "field file has no header line");
        if (const auto hash = header.find('#'); hash != std::string::npos) header.resize(hash);
    } while (trim(header).empty());

    std::istringstream hs(header);
    std::vector<std::string> tokens;
    for (std::string tok; hs >> tok;) tokens.push_back(tok);
    const double dd = parse_double(tokens.front(), "in field header");
    if (dd < 1 || dd > 3 || dd != std::floor(dd) || tokens.size() != static_cast<std::size_t>(dd) + 1)
        throw Error(ErrorCode::ParseFailure, "field header must be 'd e1 ... ed' with d in 1..3");
    std::vector<std::size_t> extent;
    std::size_t total = 1;
    for (std::size_t a = 1; a < tokens.size(); ++a) {
        const double e = parse_double(tokens[a], "in field header");
        if (e < 1 || e != std::floor(e)) throw Error(ErrorCode::ParseFailure, "field extents must be positive integers");
        extent.push_back(static_cast<std::size_t>(e));
        total *= extent.back();
    }
    std::vector<double> values;
    values.reserve(total);
    for (std::string line; std::getline(in, line);) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        for (std::string tok; ls >> tok;) values.push_back(parse_double(tok, "in field body"));
    }
    if (values.size() != total)
        throw Error(ErrorCode::ParseFailure, "field body has " + std::to_string(values.size()) + " values, header implies " +
                                                 std::to_string(total));
    return LatticeField(extent, Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
}

LatticeField read_field(const std::string& path) { return parse_field(read_text(path)); }

std::string format_field(const LatticeField& field) {
    std::string out = std::to_string(field.dim());
    for (auto e : field.extent()) out += " " + std::to_string(e);
    out += '\n';
    const std::size_t row = field.extent().back();
    const auto& v = field.values();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out += format_double(v[i]);
        out += (static_cast<std::size_t>(i + 1) % row == 0) ? '\n' : ' ';
    }
    return out;
}

void write_field(const std::string& path, const LatticeField& field) { write_text(path, format_field(field)); }

double quantile_sorted(const VectorRef& sorted, double p) {
    const auto n = sorted.size();
    if (n == 0) throw Error(ErrorCode::EmptyInput, "quantile of empty data");
    const double h = (static_cast<double>(n) - 1.0) * p;
    const auto lo = static_cast<Eigen::Index>(std::floor(h));
    const auto hi = std::min<Eigen::Index>(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

nlohmann::json quantiles_json(const EmpiricalDistribution& dist) {
    nlohmann::json q = nlohmann::json::object();
    for (double p : kReportedQuantiles) q[format_double(p)] = quantile_sorted(dist.atoms(), p);
    return q;
}

std::vector<double> to_std(const VectorRef& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

nlohmann::json estimate_to_json(const SubsamplingEstimate& est) {
    const auto dist = est.distribution();
    return {{"kind", "subsampling"},
            {"n", est.n},
            {"b", est.b},
            {"count", est.count},
            {"tau_b", est.tau_b},
            {"t_full", est.t_full},
            {"m_sub", est.m_sub},
            {"var_sub", est.var_sub},
            {"quantiles", quantiles_json(dist)},
            {"atoms", to_std(est.atoms)}};
}

SubsamplingEstimate estimate_from_json(const nlohmann::json& j) {
    try {
        const auto atoms = j.at("atoms").get<std::vector<double>>();
        if (atoms.empty()) throw Error(ErrorCode::ParseFailure, "estimate has no atoms");
        Vector v = Eigen::Map<const Vector>(atoms.data(), static_cast<Eigen::Index>(atoms.size()));
        require_finite(v, "estimate atoms");
        return make_estimate(std::move(v), j.at("n").get<std::size_t>(), j.at("b").get<std::size_t>(),
                             j.at("tau_b").get<double>(), j.at("t_full").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseFailure, std::string("malformed estimate: ") + e.what());
    }
}

nlohmann::json convolved_to_json(const ConvolvedDistribution& conv) {
    auto j = distribution_to_json(conv.realization, "convolved");
    j["k"] = conv.k;
    j["method"] = conv.method == ConvolutionMethod::Exact ? "exact" : "mc";
    j["replicates"] = conv.replicates;
    if (conv.method == ConvolutionMethod::MonteCarlo) j["seed"] = conv.seed;
    j["m_sub"] = conv.m_sub;
    j["var_sub"] = conv.var_sub;
    j["m_sub_sqrt_k"] = conv.m_sub * std::sqrt(static_cast<double>(conv.k));
    if (conv.variance_flagged) j["warning"] = conv.diagnostic;
    return j;
}

nlohmann::json distribution_to_json(const EmpiricalDistribution& dist, const std::string& kind) {
    return {{"kind", kind},
            {"count", dist.count()},
            {"mean", dist.mean()},
            {"variance", central_moment(dist, 2)},
            {"quantiles", quantiles_json(dist)},
            {"atoms", to_std(dist.atoms())}};
}

EmpiricalDistribution distribution_from_json(const nlohmann::json& j) {
    try {
        const auto atoms = j.at("atoms").get<std::vector<double>>();
        return EmpiricalDistribution(Eigen::Map<const Vector>(atoms.data(), static_cast<Eigen::Index>(atoms.size())));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseFailure, std::string("file has no usable 'atoms' array: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseFailure, e.what());
    }
}

nlohmann::json read_json(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseFailure, "'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace convsub::io
