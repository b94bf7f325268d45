#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "convsub/subsampling.hpp"

namespace convsub {

/// Exact enumeration of all C(n, b) subsets, or M uniform random subsets.
struct SubsetSamplerMode {
    enum class Kind { Exact, MonteCarlo };
    Kind kind = Kind::Exact;
    std::size_t subsets = 0;  ///< M, MonteCarlo only
    std::uint64_t seed = 0;

    static SubsetSamplerMode exact() { return {}; }
    static SubsetSamplerMode monte_carlo(std::size_t m, std::uint64_t seed) { return {Kind::MonteCarlo, m, seed}; }
};

/// C(n, b), saturating at kEnumerationCap + 1.
std::uint64_t capped_binomial(std::uint64_t n, std::uint64_t b);

/// The `rank`-th b-subset of {0..n-1} in lexicographic order (combinadic).
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t b, std::uint64_t rank);

/// Subsampling over unordered size-b subsets: atoms tau_b (t_b(subset) - t_n).
SubsamplingEstimate id_subsample_estimate(const VectorRef& series, std::size_t b, const Statistic& stat,
                                          const ScalingLaw& law, const SubsetSamplerMode& mode);

/// Coupled with/without-replacement resampler. I_1..I_b are iid uniform;
/// J_1 = I_1 and J_i = I_i unless I_i was already used, in which case J_i
/// is uniform over the unused indices.
class CoupledResampler {
public:
    explicit CoupledResampler(const VectorRef& series);

    struct Draw {
        double with_replacement_mean;
        double without_replacement_mean;
        bool all_coupled;  ///< I_i == J_i for every i
    };

    Draw draw(std::size_t b, Rng& rng);

private:
    Vector series_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

/// (X*bar_b, Y*bar_b) from one coupled draw.
std::pair<double, double> coupled_resample(const VectorRef& series, std::size_t b, Rng& rng);

struct D2GapResult {
    double gap = 0.0;           ///< mallows_d2 between the two replicate laws
    double coupling_rms = 0.0;  ///< sqrt(mean (Z_Y - Z_X)^2), an upper bound on gap
    double rms_std_error = 0.0; ///< standard error of the mean squared coupled difference
    std::size_t reps = 0;
};

/// Plug-in estimate of d2 between the k-fold convolved without-replacement
/// subsampling law and the with-replacement bootstrap law. Each replicate
/// draws k coupled resamples; Z = k^{-1/2} sum_j sqrt(b) (mean_j - Xbar_n).
D2GapResult d2_id_gap(const VectorRef& series, std::size_t b, std::size_t k, std::size_t reps, std::uint64_t seed);

/// Mean over `reps` coupled draws of b (Ybar* - Xbar*)^2.
double coupled_squared_gap(const VectorRef& series, std::size_t b, std::size_t reps, Rng& rng);

/// 16 (b/n)(1 + b/n) W_n with W_n = n (Xbar_n - mu)^2 + n^{-1} sum (X_i - mu)^2.
double coupling_bound(const VectorRef& series, std::size_t b, double mu);

}  // namespace convsub
