#include "convsub/statistics.hpp"

#include <cmath>

namespace convsub {

ScalingLaw::ScalingLaw(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::ParameterOutOfRange, "scaling exponent alpha must lie in (0, 1], got " + std::to_string(alpha));
}

double ScalingLaw::tau(double m) const {
    if (!(m >= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "tau(m) requires m >= 1");
    if (alpha_ == 1.0) return std::sqrt(m);
    return std::pow(m, alpha_ / 2.0);
}

Statistic Statistic::mean() { return Statistic(Kind::Mean, nullptr, "mean"); }

Statistic Statistic::ustat(Kernel kernel, std::string label) {
    if (!kernel) throw Error(ErrorCode::ParameterOutOfRange, "U-statistic kernel is empty");
    Rng rng(0x5eed);
    for (int i = 0; i < 16; ++i) {
        const double x = 4.0 * rng.normal();
        const double y = 4.0 * rng.normal();
        if (std::abs(kernel(x, y) - kernel(y, x)) > 1e-12)
            throw Error(ErrorCode::ParameterOutOfRange, "kernel '" + label + "' is not symmetric");
    }
    return Statistic(Kind::UStat, std::move(kernel), std::move(label));
}

Statistic Statistic::ustat(const std::string& label) {
    if (label == "product") return ustat([](double x, double y) { return x * y; }, label);
    if (label == "mean-equiv") return ustat([](double x, double y) { return (x + y) / 2.0; }, label);
    if (label == "variance") return ustat([](double x, double y) { return (x - y) * (x - y) / 2.0; }, label);
    throw Error(ErrorCode::ConfigInvalid, "unknown kernel label '" + label + "' (expected product, mean-equiv or variance)");
}

Statistic Statistic::from_label(const std::string& label) {
    if (label == "mean") return mean();
    return ustat(label);
}

double evaluate(const Statistic& stat, const VectorRef& window) {
    const auto m = window.size();
    if (static_cast<std::size_t>(m) < stat.min_window())
        throw Error(ErrorCode::WindowTooShort, "window of length " + std::to_string(m) + " is too short for " + stat.label());
    if (stat.kind() == Statistic::Kind::Mean) return compensated_mean(window);

    CompensatedSum s;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j) s.add(stat.kernel(window[i], window[j]));
    return 2.0 * s.value() / (static_cast<double>(m) * static_cast<double>(m - 1));
}

}  // namespace convsub
