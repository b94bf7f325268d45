#pragma once

#include <functional>
#include <string>

#include "convsub/common.hpp"

namespace convsub {

/// m -> tau(m) = m^{alpha/2}; alpha = 1 is the short-range sqrt(m) case.
class ScalingLaw {
public:
    explicit ScalingLaw(double alpha = 1.0);

    double alpha() const noexcept { return alpha_; }
    double tau(double m) const;

private:
    double alpha_;
};

inline double tau(const ScalingLaw& law, double m) { return law.tau(m); }

using Kernel = std::function<double(double, double)>;

/// Window functional t_b: the sample mean or a degree-2 U-statistic.
class Statistic {
public:
    enum class Kind { Mean, UStat };

    static Statistic mean();
    /// Spot-checks kernel symmetry on 16 pseudo-random pairs; throws
    /// ParameterOutOfRange if |h(x,y) - h(y,x)| > 1e-12 anywhere.
    static Statistic ustat(Kernel kernel, std::string label);
    /// Registered kernels: "product" (xy), "mean-equiv" ((x+y)/2),
    /// "variance" ((x-y)^2/2).
    static Statistic ustat(const std::string& label);
    /// "mean" or a registered kernel label.
    static Statistic from_label(const std::string& label);

    Kind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t min_window() const noexcept { return kind_ == Kind::Mean ? 1 : 2; }
    double kernel(double x, double y) const { return kernel_(x, y); }

private:
    Statistic(Kind kind, Kernel kernel, std::string label)
        : kind_(kind), kernel_(std::move(kernel)), label_(std::move(label)) {}

    Kind kind_;
    Kernel kernel_;
    std::string label_;
};

/// Mean: arithmetic mean. UStat: 2/(m(m-1)) * sum_{i<j} h(x_i, x_j), O(m^2).
double evaluate(const Statistic& stat, const VectorRef& window);

}  // namespace convsub
