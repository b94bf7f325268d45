#include "convsub/convolution.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "convsub/parallel.hpp"

namespace convsub {

namespace {

constexpr std::size_t kChunk = 4096;

void require_k(std::size_t k) {
    if (k == 0) throw Error(ErrorCode::ParameterOutOfRange, "number of convolved draws k must be positive");
}

}  // namespace

std::uint64_t capped_power(std::uint64_t base, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        if (base != 0 && r > (kEnumerationCap + 1) / base) return kEnumerationCap + 1;
        r *= base;
        if (r > kEnumerationCap) return kEnumerationCap + 1;
    }
    return r;
}

ConvolvedMoments convolved_moments(const SubsamplingEstimate& estimate, std::size_t k) {
    require_k(k);
    return {0.0, estimate.var_sub, central_moment(estimate.atoms, 3) / std::sqrt(static_cast<double>(k))};
}

Vector convolve_atoms_exact(const VectorRef& atoms, double center, std::size_t k) {
    require_k(k);
    const auto base = static_cast<std::uint64_t>(atoms.size());
    const std::uint64_t total = capped_power(base, k);
    if (total > kEnumerationCap) {
        std::ostringstream msg;
        msg << base << "^" << k << " tuples exceed the enumeration cap of " << kEnumerationCap;
        throw Error(ErrorCode::EnumerationTooLarge, msg.str());
    }
    const Vector y = atoms.array() - center;
    const double root_k = std::sqrt(static_cast<double>(k));

    // Odometer over k digits; partial[d] holds the running sum through digit d.
    std::vector<Eigen::Index> digit(k, 0);
    std::vector<double> partial(k, 0.0);
    for (std::size_t d = 0; d < k; ++d) partial[d] = (d ? partial[d - 1] : 0.0) + y[0];
    Vector out(static_cast<Eigen::Index>(total));
    for (std::uint64_t t = 0; t < total; ++t) {
        out[static_cast<Eigen::Index>(t)] = partial[k - 1] / root_k;
        std::size_t d = k;
        while (d > 0) {
            --d;
            if (++digit[d] < static_cast<Eigen::Index>(base)) break;
            digit[d] = 0;
        }
        for (; d < k; ++d) partial[d] = (d ? partial[d - 1] : 0.0) + y[digit[d]];
    }
    return out;
}

ConvolvedDistribution convolve_exact(const SubsamplingEstimate& estimate, std::size_t k) {
    Vector atoms = convolve_atoms_exact(estimate.atoms, estimate.m_sub, k);
    const auto total = static_cast<std::size_t>(atoms.size());
    return ConvolvedDistribution{k,
                                 ConvolutionMethod::Exact,
                                 total,
                                 0,
                                 estimate.m_sub,
                                 estimate.var_sub,
                                 EmpiricalDistribution(atoms),
                                 false,
                                 {}};
}

ConvolvedDistribution convolve_mc(const SubsamplingEstimate& estimate, std::size_t k, std::size_t replicates,
                                  std::uint64_t seed, unsigned workers) {
    require_k(k);
    if (replicates == 0) throw Error(ErrorCode::ParameterOutOfRange, "Monte Carlo size M must be positive");
    const Vector& atoms = estimate.atoms;
    const auto count = static_cast<std::size_t>(atoms.size());
    const double center = estimate.m_sub;
    const double root_k = std::sqrt(static_cast<double>(k));

    Vector out(static_cast<Eigen::Index>(replicates));
    const std::size_t chunks = (replicates + kChunk - 1) / kChunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        Rng rng = Rng::substream(seed, c);
        std::uniform_int_distribution<std::size_t> pick(0, count - 1);
        const std::size_t end = std::min(replicates, (c + 1) * kChunk);
        for (std::size_t r = c * kChunk; r < end; ++r) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += atoms[static_cast<Eigen::Index>(pick(rng.engine()))] - center;
            out[static_cast<Eigen::Index>(r)] = s / root_k;
        }
    });

    ConvolvedDistribution conv{k, ConvolutionMethod::MonteCarlo, replicates, seed, center, estimate.var_sub,
                               EmpiricalDistribution(out), false, {}};
    if (replicates > 1) {
        // Var of the sample variance from the fourth moment of Z*.
        const double s2 = central_moment(out, 2);
        const double v = estimate.var_sub;
        const double mu4_base = central_moment(atoms, 4);
        const double mu4 = 3.0 * v * v + (mu4_base - 3.0 * v * v) / static_cast<double>(k);
        const double se = std::sqrt(std::max(0.0, mu4 - v * v) / static_cast<double>(replicates));
        if (std::abs(s2 - v) > 5.0 * se && std::abs(s2 - v) > 1e-12 * std::max(1.0, v)) {
            conv.variance_flagged = true;
            std::ostringstream msg;
            msg << "Monte Carlo variance " << s2 << " deviates from var_sub " << v << " by more than 5 standard errors ("
                << se << ")";
            conv.diagnostic = msg.str();
        }
    }
    return conv;
}

double convolved_cdf(const ConvolvedDistribution& conv, double x) { return cdf(conv.realization, x); }

}  // namespace convsub
