#include "convsub/subsampling.hpp"

#include <cmath>
#include <vector>

namespace convsub {

namespace {

void check_block(std::size_t n, std::size_t b, const Statistic& stat) {
    if (b >= n)
        throw Error(ErrorCode::BlockTooLarge, "block length " + std::to_string(b) + " must be below n = " + std::to_string(n));
    if (b < 2 || b < stat.min_window())
        throw Error(ErrorCode::BlockTooSmall, "block length " + std::to_string(b) + " is below the minimum of 2");
}

}  // namespace

SubsamplingEstimate make_estimate(Vector atoms, std::size_t n, std::size_t b, double tau_b, double t_full) {
    SubsamplingEstimate est;
    est.count = static_cast<std::size_t>(atoms.size());
    est.m_sub = compensated_mean(atoms);
    est.var_sub = std::max(0.0, central_moment(atoms, 2));
    est.atoms = std::move(atoms);
    est.n = n;
    est.b = b;
    est.tau_b = tau_b;
    est.t_full = t_full;
    return est;
}

Vector window_deviations(const VectorRef& series, std::size_t b, const Statistic& stat, double center) {
    const auto n = static_cast<std::size_t>(series.size());
    const auto windows = static_cast<Eigen::Index>(n - b + 1);
    Vector out(windows);
    if (stat.kind() == Statistic::Kind::Mean) {
        // Prefix sums of (x - center) kept as an unevaluated hi + lo pair.
        std::vector<double> hi(n + 1, 0.0), lo(n + 1, 0.0);
        CompensatedSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            acc.add(series[static_cast<Eigen::Index>(i)] - center);
            hi[i + 1] = acc.hi();
            lo[i + 1] = acc.lo();
        }
        const double inv_b = 1.0 / static_cast<double>(b);
        for (Eigen::Index i = 0; i < windows; ++i) {
            const auto j = static_cast<std::size_t>(i) + b;
            out[i] = ((hi[j] - hi[i]) + (lo[j] - lo[i])) * inv_b;
        }
        return out;
    }
    for (Eigen::Index i = 0; i < windows; ++i)
        out[i] = evaluate(stat, series.segment(i, static_cast<Eigen::Index>(b))) - center;
    return out;
}

SubsamplingEstimate subsample_estimate(const VectorRef& series, std::size_t b, const Statistic& stat,
                                       const ScalingLaw& law) {
    const auto n = static_cast<std::size_t>(series.size());
    check_block(n, b, stat);
    require_finite(series, "series");
    const double t_full = evaluate(stat, series);
    const double tau_b = law.tau(static_cast<double>(b));
    Vector atoms = tau_b * window_deviations(series, b, stat, t_full);
    return make_estimate(std::move(atoms), n, b, tau_b, t_full);
}

Vector oracle_centered_atoms(const VectorRef& series, std::size_t b, const Statistic& stat, const ScalingLaw& law,
                             double theta) {
    check_block(static_cast<std::size_t>(series.size()), b, stat);
    require_finite(series, "series");
    return law.tau(static_cast<double>(b)) * window_deviations(series, b, stat, theta);
}

double truncated_second_moment(const VectorRef& atoms, double m) {
    if (!(m > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "truncation level must be positive");
    if (atoms.size() == 0) throw Error(ErrorCode::EmptyInput, "no atoms");
    CompensatedSum s;
    for (Eigen::Index i = 0; i < atoms.size(); ++i)
        if (std::abs(atoms[i]) > m) s.add(atoms[i] * atoms[i]);
    return s.value() / static_cast<double>(atoms.size());
}

double abs_moment(const VectorRef& atoms, double p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "absolute moment order must be >= 1");
    if (atoms.size() == 0) throw Error(ErrorCode::EmptyInput, "no atoms");
    CompensatedSum s;
    for (Eigen::Index i = 0; i < atoms.size(); ++i) {
        const double a = std::abs(atoms[i]);
        s.add(p == 2.0 ? a * a : std::pow(a, p));
    }
    return s.value() / static_cast<double>(atoms.size());
}

double abs_moment(const SubsamplingEstimate& estimate, double p) { return abs_moment(estimate.atoms, p); }

}  // namespace convsub
