#include "convsub/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace convsub {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::BlockTooLarge: return "BlockTooLarge";
    case ErrorCode::BlockTooSmall: return "BlockTooSmall";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::EmptyIndexSet: return "EmptyIndexSet";
    case ErrorCode::MissingSites: return "MissingSites";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

void require_finite(const VectorRef& values, const char* what) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error(ErrorCode::NonFiniteValue, std::string(what) + " has a non-finite value at index " + std::to_string(i));
    }
}

EmpiricalDistribution::EmpiricalDistribution(const VectorRef& values) {
    if (values.size() == 0) throw Error(ErrorCode::EmptyInput, "empirical distribution needs at least one atom");
    require_finite(values, "atom list");
    atoms_ = values;
    std::sort(atoms_.begin(), atoms_.end());
}

EmpiricalDistribution build_empirical(const VectorRef& values) { return EmpiricalDistribution(values); }

double cdf(const EmpiricalDistribution& dist, double x) {
    const auto& a = dist.atoms();
    const auto it = std::upper_bound(a.begin(), a.end(), x);
    return static_cast<double>(it - a.begin()) / static_cast<double>(dist.count());
}

double cdf_left(const EmpiricalDistribution& dist, double x) {
    const auto& a = dist.atoms();
    const auto it = std::lower_bound(a.begin(), a.end(), x);
    return static_cast<double>(it - a.begin()) / static_cast<double>(dist.count());
}

double central_moment(const VectorRef& atoms, int p) {
    if (p < 1 || p > 4) throw Error(ErrorCode::UnsupportedOrder, "central moment order must be in 1..4, got " + std::to_string(p));
    if (atoms.size() == 0) throw Error(ErrorCode::EmptyInput, "central moment of an empty atom list");
    const double mean = compensated_mean(atoms);
    CompensatedSum s;
    for (Eigen::Index i = 0; i < atoms.size(); ++i) {
        const double d = atoms[i] - mean;
        double term = d;
        for (int q = 1; q < p; ++q) term *= d;
        s.add(term);
    }
    return s.value() / static_cast<double>(atoms.size());
}

double central_moment(const EmpiricalDistribution& dist, int p) { return central_moment(dist.atoms(), p); }

double skewness(const VectorRef& atoms) {
    const double var = central_moment(atoms, 2);
    if (var <= 0.0) return 0.0;
    return central_moment(atoms, 3) / std::pow(var, 1.5);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    // Halley refinement
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

double ks_to_normal(const EmpiricalDistribution& dist, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(ErrorCode::NonPositiveSigma, "sigma must be positive and finite");
    const auto& a = dist.atoms();
    const auto n = a.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    double gap = 0.0;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i + 1;
        while (j < n && a[j] == a[i]) ++j;
        const double phi = normal_cdf(a[i] / sigma);
        gap = std::max({gap, static_cast<double>(j) * inv_n - phi, phi - static_cast<double>(i) * inv_n});
        i = j;
    }
    return gap;
}

namespace {

// max over atoms x of F of F(x) - G(x + tol)
double one_sided_gap(const EmpiricalDistribution& f, const EmpiricalDistribution& g, double tol) {
    const auto& a = f.atoms();
    const auto& b = g.atoms();
    const double nf = static_cast<double>(f.count());
    const double ng = static_cast<double>(g.count());
    double gap = 0.0;
    Eigen::Index j = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
        while (j < b.size() && b[j] <= a[i] + tol) ++j;
        gap = std::max(gap, static_cast<double>(i + 1) / nf - static_cast<double>(j) / ng);
    }
    return gap;
}

}  // namespace

double ks_between(const EmpiricalDistribution& f, const EmpiricalDistribution& g, double atom_tol) {
    return std::max(one_sided_gap(f, g, atom_tol), one_sided_gap(g, f, atom_tol));
}

double mallows_d2(const EmpiricalDistribution& f, const EmpiricalDistribution& g) {
    const auto& x = f.atoms();
    const auto& y = g.atoms();
    const std::int64_t m = x.size();
    const std::int64_t n = y.size();
    if (m == n) {
        CompensatedSum s;
        for (std::int64_t i = 0; i < m; ++i) s.add((x[i] - y[i]) * (x[i] - y[i]));
        return std::sqrt(std::max(0.0, s.value()) / static_cast<double>(m));
    }
    // Quantile breakpoints in units of 1/(m n): F steps at (i+1) n, G at (j+1) m.
    CompensatedSum s;
    std::int64_t i = 0, j = 0, pos = 0;
    while (i < m && j < n) {
        const std::int64_t next = std::min((i + 1) * n, (j + 1) * m);
        const double d = x[i] - y[j];
        s.add(static_cast<double>(next - pos) * d * d);
        pos = next;
        if (next == (i + 1) * n) ++i;
        if (next == (j + 1) * m) ++j;
    }
    return std::sqrt(std::max(0.0, s.value()) / (static_cast<double>(m) * static_cast<double>(n)));
}

Vector sample(const EmpiricalDistribution& dist, Rng& rng, std::size_t m) {
    Vector out(static_cast<Eigen::Index>(m));
    const auto& a = dist.atoms();
    for (std::size_t i = 0; i < m; ++i) out[static_cast<Eigen::Index>(i)] = a[static_cast<Eigen::Index>(rng.index(dist.count()))];
    return out;
}

}  // namespace convsub
