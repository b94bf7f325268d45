#pragma once

#include <cstddef>

#include "convsub/common.hpp"
#include "convsub/empirical.hpp"
#include "convsub/statistics.hpp"

namespace convsub {

/// Subsampling distribution of tau_b (t_{n,b,i} - t_n) over the N_n
/// subsamples, with its first two moments.
struct SubsamplingEstimate {
    Vector atoms;           ///< in subsample order (window i, translate i, ...)
    std::size_t n = 0;      ///< observations in the full sample
    std::size_t b = 0;      ///< observations per subsample
    std::size_t count = 0;  ///< N_n, number of subsamples (== atoms.size())
    double tau_b = 1.0;
    double m_sub = 0.0;     ///< mean of the atoms
    double var_sub = 0.0;   ///< variance of the atoms
    double t_full = 0.0;    ///< t_n on the full sample

    EmpiricalDistribution distribution() const { return EmpiricalDistribution(atoms); }
};

/// Fills m_sub / var_sub / count from `atoms`.
SubsamplingEstimate make_estimate(Vector atoms, std::size_t n, std::size_t b, double tau_b, double t_full);

/// Overlapping-window subsampling estimator. Requires 2 <= b < n.
/// The Mean statistic uses compensated prefix sums of the centered series,
/// O(n) overall; U-statistics recompute each window in O(b^2).
SubsamplingEstimate subsample_estimate(const VectorRef& series, std::size_t b, const Statistic& stat,
                                       const ScalingLaw& law);

/// tau_b (t_{n,b,i} - theta) for a known parameter theta.
Vector oracle_centered_atoms(const VectorRef& series, std::size_t b, const Statistic& stat, const ScalingLaw& law,
                             double theta);

/// Per-window statistics minus `center`, without scaling. Exposed for the
/// bootstrap module, which needs raw block means.
Vector window_deviations(const VectorRef& series, std::size_t b, const Statistic& stat, double center);

/// (1/N) sum atom^2 1{|atom| > m}.
double truncated_second_moment(const VectorRef& atoms, double m);

/// (1/N_n) sum |atom|^p, p >= 1.
double abs_moment(const SubsamplingEstimate& estimate, double p);
double abs_moment(const VectorRef& atoms, double p);

}  // namespace convsub
