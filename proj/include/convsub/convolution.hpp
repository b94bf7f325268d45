#pragma once

#include <cstdint>
#include <string>

#include "convsub/empirical.hpp"
#include "convsub/subsampling.hpp"

namespace convsub {

/// Largest number of tuples any exact enumeration will materialize.
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

/// base^k, saturating at kEnumerationCap + 1.
std::uint64_t capped_power(std::uint64_t base, std::uint64_t k);

struct ConvolvedMoments {
    double mean = 0.0;
    double variance = 0.0;
    double third_central = 0.0;
};

/// Closed-form moments of Z* = k^{-1/2} sum_{j<=k} (Y_j - m_sub) with Y_j iid
/// from the subsampling distribution: (0, var_sub, mu_3 / sqrt(k)).
ConvolvedMoments convolved_moments(const SubsamplingEstimate& estimate, std::size_t k);

enum class ConvolutionMethod { Exact, MonteCarlo };

/// A realization of the k-fold convolved subsampling law.
struct ConvolvedDistribution {
    std::size_t k = 1;
    ConvolutionMethod method = ConvolutionMethod::Exact;
    std::size_t replicates = 0;  ///< M for MonteCarlo, N_n^k for Exact
    std::uint64_t seed = 0;
    double m_sub = 0.0;          ///< centering taken from the base estimate
    double var_sub = 0.0;
    EmpiricalDistribution realization;
    /// MonteCarlo only: set when the realization's variance is more than
    /// five standard errors from var_sub.
    bool variance_flagged = false;
    std::string diagnostic;
};

/// Exact law over all N_n^k ordered draws. Throws EnumerationTooLarge when
/// N_n^k exceeds kEnumerationCap.
ConvolvedDistribution convolve_exact(const SubsamplingEstimate& estimate, std::size_t k);

/// Exact k-fold convolution of arbitrary equal-weight atoms, centered by
/// their mean. Shared by the spatial and bootstrap-equivalence checks.
Vector convolve_atoms_exact(const VectorRef& atoms, double center, std::size_t k);

/// M Monte Carlo replicates. Replicates are split into fixed chunks, each
/// with its own substream of `seed`, so the output does not depend on
/// `workers`.
ConvolvedDistribution convolve_mc(const SubsamplingEstimate& estimate, std::size_t k, std::size_t replicates,
                                  std::uint64_t seed, unsigned workers = 1);

double convolved_cdf(const ConvolvedDistribution& conv, double x);

}  // namespace convsub
