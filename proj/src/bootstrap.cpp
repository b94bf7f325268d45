#include "convsub/bootstrap.hpp"

#include <cmath>
#include <vector>

#include "convsub/parallel.hpp"
#include "convsub/subsampling.hpp"

namespace convsub {

namespace {

constexpr std::size_t kChunk = 4096;

double default_tol(const VectorRef& a, const VectorRef& b) {
    const double scale = std::max(a.size() ? a.cwiseAbs().maxCoeff() : 0.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
    return 1e-9 * std::max(scale, 1e-300);
}

}  // namespace

BootstrapSpec make_bootstrap_spec(std::size_t n, std::size_t b, std::optional<std::size_t> k, double alpha) {
    if (b == 0) throw Error(ErrorCode::BlockTooSmall, "block length must be positive");
    if (b >= n) throw Error(ErrorCode::BlockTooLarge, "block length " + std::to_string(b) + " must be below n = " + std::to_string(n));
    const std::size_t kk = k.value_or(n / b);
    if (kk == 0) throw Error(ErrorCode::ParameterOutOfRange, "number of blocks k must be positive");
    ScalingLaw check(alpha);
    (void)check;
    return {b, kk, alpha};
}

double bootstrap_prefactor(const BootstrapSpec& spec, BootstrapScaling scaling) {
    const double n1 = static_cast<double>(spec.resample_size());
    if (spec.alpha == 1.0) return std::sqrt(n1);
    const double base = std::pow(n1, spec.alpha / 2.0);
    if (scaling == BootstrapScaling::Unadjusted) return base;
    return std::pow(static_cast<double>(spec.b), (1.0 - spec.alpha) / 2.0) * base;
}

BlockBootstrap::BlockBootstrap(const VectorRef& series, BootstrapSpec spec) : spec_(spec) {
    const auto n = static_cast<std::size_t>(series.size());
    if (spec.b == 0) throw Error(ErrorCode::BlockTooSmall, "block length must be positive");
    if (spec.b >= n)
        throw Error(ErrorCode::BlockTooLarge, "block length " + std::to_string(spec.b) + " must be below n = " + std::to_string(n));
    if (spec.k == 0) throw Error(ErrorCode::ParameterOutOfRange, "number of blocks k must be positive");
    ScalingLaw check(spec.alpha);
    (void)check;
    require_finite(series, "series");

    // Block means relative to the sample mean, then re-centered at E_*.
    const double xbar = compensated_mean(series);
    Vector dev = window_deviations(series, spec.b, Statistic::mean(), xbar);
    const double shift = compensated_mean(dev);
    expectation_ = xbar + shift;
    deviations_ = dev.array() - shift;
}

double BlockBootstrap::draw(Rng& rng, BootstrapScaling scaling) const {
    std::uniform_int_distribution<std::size_t> pick(0, block_count() - 1);
    double s = 0.0;
    for (std::size_t j = 0; j < spec_.k; ++j) s += deviations_[static_cast<Eigen::Index>(pick(rng.engine()))];
    return bootstrap_prefactor(spec_, scaling) * (s / static_cast<double>(spec_.k));
}

double mbb_replicate(const VectorRef& series, const BootstrapSpec& spec, Rng& rng, BootstrapScaling scaling) {
    return BlockBootstrap(series, spec).draw(rng, scaling);
}

EmpiricalDistribution mbb_distribution(const VectorRef& series, const BootstrapSpec& spec, std::size_t reps,
                                       std::uint64_t seed, BootstrapScaling scaling, unsigned workers) {
    if (reps == 0) throw Error(ErrorCode::ParameterOutOfRange, "bootstrap replicate count must be positive");
    const BlockBootstrap boot(series, spec);
    Vector out(static_cast<Eigen::Index>(reps));
    const std::size_t chunks = (reps + kChunk - 1) / kChunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        Rng rng = Rng::substream(seed, c);
        const std::size_t end = std::min(reps, (c + 1) * kChunk);
        for (std::size_t r = c * kChunk; r < end; ++r) out[static_cast<Eigen::Index>(r)] = boot.draw(rng, scaling);
    });
    return EmpiricalDistribution(out);
}

EmpiricalDistribution mbb_exact(const VectorRef& series, const BootstrapSpec& spec, BootstrapScaling scaling) {
    const BlockBootstrap boot(series, spec);
    const auto blocks = static_cast<std::uint64_t>(boot.block_count());
    const std::uint64_t total = capped_power(blocks, spec.k);
    if (total > kEnumerationCap)
        throw Error(ErrorCode::EnumerationTooLarge, std::to_string(blocks) + "^" + std::to_string(spec.k) +
                                                        " block tuples exceed the enumeration cap");
    const Vector& dev = boot.block_deviations();
    const double factor = bootstrap_prefactor(spec, scaling) / static_cast<double>(spec.k);
    std::vector<std::uint64_t> tuple(spec.k, 0);
    Vector out(static_cast<Eigen::Index>(total));
    for (std::uint64_t t = 0; t < total; ++t) {
        std::uint64_t r = t;
        double s = 0.0;
        for (std::size_t j = 0; j < spec.k; ++j) {
            s += dev[static_cast<Eigen::Index>(r % blocks)];
            r /= blocks;
        }
        out[static_cast<Eigen::Index>(t)] = factor * s;
    }
    return EmpiricalDistribution(out);
}

double mbb_variance(const VectorRef& series, const BootstrapSpec& spec, BootstrapScaling scaling) {
    const BlockBootstrap boot(series, spec);
    const double pref = bootstrap_prefactor(spec, scaling);
    return pref * pref * abs_moment(boot.block_deviations(), 2.0) / static_cast<double>(spec.k);
}

double equivalence_gap(const VectorRef& series, std::size_t b, std::size_t k, double alpha, double atom_tol) {
    const BootstrapSpec spec = make_bootstrap_spec(static_cast<std::size_t>(series.size()), b, k, alpha);
    const EmpiricalDistribution boot = mbb_exact(series, spec);
    const BlockBootstrap blocks(series, spec);
    const Vector atoms = ScalingLaw(alpha).tau(static_cast<double>(b)) * blocks.block_deviations();
    const EmpiricalDistribution conv(convolve_atoms_exact(atoms, compensated_mean(atoms), k));
    if (atom_tol <= 0.0) atom_tol = default_tol(boot.atoms(), conv.atoms());
    return ks_between(boot, conv, atom_tol);
}

double centering_gap(const VectorRef& series, std::size_t b, std::size_t k, double alpha) {
    const BootstrapSpec spec = make_bootstrap_spec(static_cast<std::size_t>(series.size()), b, k, alpha);
    const EmpiricalDistribution boot = mbb_exact(series, spec);
    const auto est = subsample_estimate(series, b, Statistic::mean(), ScalingLaw(alpha));
    const auto conv = convolve_exact(est, k);
    return ks_between(boot, conv.realization, default_tol(boot.atoms(), conv.realization.atoms()));
}

}  // namespace convsub
