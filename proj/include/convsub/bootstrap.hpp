#pragma once

#include <cstdint>
#include <optional>

#include "convsub/convolution.hpp"
#include "convsub/empirical.hpp"

namespace convsub {

/// Moving-block bootstrap layout: k blocks of length b, resample size k*b.
struct BootstrapSpec {
    std::size_t b = 1;
    std::size_t k = 1;
    double alpha = 1.0;

    std::size_t resample_size() const noexcept { return k * b; }
};

/// k defaults to floor(n / b).
BootstrapSpec make_bootstrap_spec(std::size_t n, std::size_t b, std::optional<std::size_t> k, double alpha = 1.0);

/// Corrected: b^{(1-alpha)/2} n1^{alpha/2}, the long-memory form.
/// Unadjusted: n1^{alpha/2}, which degenerates under long memory.
/// Both reduce to sqrt(n1) at alpha = 1.
enum class BootstrapScaling { Corrected, Unadjusted };

double bootstrap_prefactor(const BootstrapSpec& spec, BootstrapScaling scaling = BootstrapScaling::Corrected);

/// Precomputed block means of one series. The bootstrap mean of k
/// concatenated blocks equals the average of their block means, so each
/// replicate costs O(k).
class BlockBootstrap {
public:
    BlockBootstrap(const VectorRef& series, BootstrapSpec spec);

    const BootstrapSpec& spec() const noexcept { return spec_; }
    std::size_t block_count() const noexcept { return static_cast<std::size_t>(deviations_.size()); }
    /// E_* of the bootstrap mean: the average of all block means.
    double bootstrap_expectation() const noexcept { return expectation_; }
    /// Block means minus bootstrap_expectation().
    const Vector& block_deviations() const noexcept { return deviations_; }

    /// One T*: prefactor * (X*bar - E_* X*bar).
    double draw(Rng& rng, BootstrapScaling scaling = BootstrapScaling::Corrected) const;

private:
    BootstrapSpec spec_;
    Vector deviations_;
    double expectation_ = 0.0;
};

double mbb_replicate(const VectorRef& series, const BootstrapSpec& spec, Rng& rng,
                     BootstrapScaling scaling = BootstrapScaling::Corrected);

/// `reps` replicates in seed-deterministic chunks.
EmpiricalDistribution mbb_distribution(const VectorRef& series, const BootstrapSpec& spec, std::size_t reps,
                                       std::uint64_t seed, BootstrapScaling scaling = BootstrapScaling::Corrected,
                                       unsigned workers = 1);

/// Exact law of T* over all N_n^k block tuples.
EmpiricalDistribution mbb_exact(const VectorRef& series, const BootstrapSpec& spec,
                                BootstrapScaling scaling = BootstrapScaling::Corrected);

/// Exact variance of T*: prefactor^2 * (mean squared block deviation) / k.
double mbb_variance(const VectorRef& series, const BootstrapSpec& spec,
                    BootstrapScaling scaling = BootstrapScaling::Corrected);

/// KS distance between mbb_exact and the exact k-fold convolution of the
/// E_*-centered atoms tau_b (block mean - E_* X*bar). Zero up to `atom_tol`
/// rounding at alpha = 1 (and whenever b == k). Non-positive `atom_tol`
/// selects 1e-9 times the largest atom magnitude.
double equivalence_gap(const VectorRef& series, std::size_t b, std::size_t k, double alpha, double atom_tol = -1.0);

/// The same comparison against the t_n-centered convolved subsampling law,
/// i.e. convolve_exact(subsample_estimate(...)). Nonzero in general: the two
/// centerings differ by edge effects of order b/n. Requires b >= 2.
double centering_gap(const VectorRef& series, std::size_t b, std::size_t k, double alpha);

}  // namespace convsub
