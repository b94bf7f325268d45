#include "convsub/independent.hpp"

#include <cmath>
#include <numeric>

#include "convsub/convolution.hpp"

namespace convsub {

std::uint64_t capped_binomial(std::uint64_t n, std::uint64_t b) {
    if (b > n) return 0;
    b = std::min(b, n - b);
    // Multiplicative formula; each partial product is itself a binomial.
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) {
        r = r * (n - b + i) / i;
        if (r > kEnumerationCap) return kEnumerationCap + 1;
    }
    return static_cast<std::uint64_t>(r);
}

std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t b, std::uint64_t rank) {
    std::vector<std::size_t> out;
    out.reserve(b);
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < b; ++slot) {
        // Skip candidates whose block of completions lies before `rank`.
        for (;; ++next) {
            const std::uint64_t block = capped_binomial(n - next - 1, b - slot - 1);
            if (rank < block) break;
            rank -= block;
        }
        out.push_back(next++);
    }
    return out;
}

SubsamplingEstimate id_subsample_estimate(const VectorRef& series, std::size_t b, const Statistic& stat,
                                          const ScalingLaw& law, const SubsetSamplerMode& mode) {
    const auto n = static_cast<std::size_t>(series.size());
    if (b >= n) throw Error(ErrorCode::BlockTooLarge, "subset size " + std::to_string(b) + " must be below n = " + std::to_string(n));
    if (b < 2) throw Error(ErrorCode::BlockTooSmall, "subset size must be at least 2");
    require_finite(series, "series");
    const double t_full = evaluate(stat, series);
    const double tau_b = law.tau(static_cast<double>(b));
    const bool is_mean = stat.kind() == Statistic::Kind::Mean;
    Vector centered = series.array() - t_full;
    Vector window(static_cast<Eigen::Index>(b));

    auto atom = [&](const std::vector<std::size_t>& idx) {
        if (is_mean) {
            CompensatedSum s;
            for (auto i : idx) s.add(centered[static_cast<Eigen::Index>(i)]);
            return tau_b * s.value() / static_cast<double>(b);
        }
        for (std::size_t j = 0; j < b; ++j) window[static_cast<Eigen::Index>(j)] = series[static_cast<Eigen::Index>(idx[j])];
        return tau_b * (evaluate(stat, window) - t_full);
    };

    Vector atoms;
    if (mode.kind == SubsetSamplerMode::Kind::Exact) {
        const std::uint64_t total = capped_binomial(n, b);
        if (total > kEnumerationCap)
            throw Error(ErrorCode::EnumerationTooLarge, "C(" + std::to_string(n) + ", " + std::to_string(b) +
                                                            ") subsets exceed the enumeration cap");
        atoms.resize(static_cast<Eigen::Index>(total));
        std::vector<std::size_t> idx = unrank_combination(n, b, 0);
        for (std::uint64_t r = 0; r < total; ++r) {
            atoms[static_cast<Eigen::Index>(r)] = atom(idx);
            // Lexicographic successor, equal to unrank_combination(n, b, r + 1).
            std::size_t pos = b;
            while (pos > 0 && idx[pos - 1] == n - b + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t j = pos; j < b; ++j) idx[j] = idx[j - 1] + 1;
        }
    } else {
        if (mode.subsets == 0) throw Error(ErrorCode::ParameterOutOfRange, "Monte Carlo subset count must be positive");
        atoms.resize(static_cast<Eigen::Index>(mode.subsets));
        Rng rng(mode.seed);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::vector<std::size_t> idx(b);
        for (std::size_t r = 0; r < mode.subsets; ++r) {
            // Partial Fisher-Yates; the permutation need not be reset since
            // any permutation is a valid starting point.
            for (std::size_t j = 0; j < b; ++j) {
                const std::size_t pick = j + rng.index(n - j);
                std::swap(perm[j], perm[pick]);
                idx[j] = perm[j];
            }
            atoms[static_cast<Eigen::Index>(r)] = atom(idx);
        }
    }
    return make_estimate(std::move(atoms), n, b, tau_b, t_full);
}

CoupledResampler::CoupledResampler(const VectorRef& series)
    : series_(series), stamp_(static_cast<std::size_t>(series.size()), 0) {
    if (series.size() == 0) throw Error(ErrorCode::EmptyInput, "series is empty");
}

CoupledResampler::Draw CoupledResampler::draw(std::size_t b, Rng& rng) {
    const auto n = static_cast<std::size_t>(series_.size());
    if (b == 0 || b > n) throw Error(ErrorCode::BlockTooLarge, "coupled resample size must lie in 1..n");
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    double sx = 0.0, sy = 0.0;
    bool coupled = true;
    for (std::size_t i = 0; i < b; ++i) {
        const std::size_t in = rng.index(n);
        sx += series_[static_cast<Eigen::Index>(in)];
        std::size_t jn = in;
        if (stamp_[jn] == epoch_) {
            coupled = false;
            // Rejection from {0..n-1} is uniform over the unused indices.
            do jn = rng.index(n);
            while (stamp_[jn] == epoch_);
        }
        stamp_[jn] = epoch_;
        sy += series_[static_cast<Eigen::Index>(jn)];
    }
    return {sx / static_cast<double>(b), sy / static_cast<double>(b), coupled};
}

std::pair<double, double> coupled_resample(const VectorRef& series, std::size_t b, Rng& rng) {
    CoupledResampler resampler(series);
    const auto d = resampler.draw(b, rng);
    return {d.with_replacement_mean, d.without_replacement_mean};
}

D2GapResult d2_id_gap(const VectorRef& series, std::size_t b, std::size_t k, std::size_t reps, std::uint64_t seed) {
    if (reps < 1000) throw Error(ErrorCode::ParameterOutOfRange, "d2 gap needs at least 1000 replicates");
    if (k == 0) throw Error(ErrorCode::ParameterOutOfRange, "k must be positive");
    require_finite(series, "series");
    CoupledResampler resampler(series);
    const double xbar = compensated_mean(series);
    const double root_b = std::sqrt(static_cast<double>(b));
    const double inv_root_k = 1.0 / std::sqrt(static_cast<double>(k));
    Rng rng(seed);
    Vector zx(static_cast<Eigen::Index>(reps)), zy(static_cast<Eigen::Index>(reps)), sq(static_cast<Eigen::Index>(reps));
    for (std::size_t r = 0; r < reps; ++r) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const auto d = resampler.draw(b, rng);
            sx += root_b * (d.with_replacement_mean - xbar);
            sy += root_b * (d.without_replacement_mean - xbar);
        }
        const auto i = static_cast<Eigen::Index>(r);
        zx[i] = sx * inv_root_k;
        zy[i] = sy * inv_root_k;
        sq[i] = (zy[i] - zx[i]) * (zy[i] - zx[i]);
    }
    D2GapResult out;
    out.reps = reps;
    out.gap = mallows_d2(EmpiricalDistribution(zy), EmpiricalDistribution(zx));
    const double msq = compensated_mean(sq);
    out.coupling_rms = std::sqrt(msq);
    out.rms_std_error = std::sqrt(central_moment(sq, 2) / static_cast<double>(reps));
    return out;
}

double coupled_squared_gap(const VectorRef& series, std::size_t b, std::size_t reps, Rng& rng) {
    CoupledResampler resampler(series);
    CompensatedSum s;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto d = resampler.draw(b, rng);
        const double diff = d.without_replacement_mean - d.with_replacement_mean;
        s.add(static_cast<double>(b) * diff * diff);
    }
    return s.value() / static_cast<double>(reps);
}

double coupling_bound(const VectorRef& series, std::size_t b, double mu) {
    const double n = static_cast<double>(series.size());
    const double xbar = compensated_mean(series);
    CompensatedSum s;
    for (Eigen::Index i = 0; i < series.size(); ++i) s.add((series[i] - mu) * (series[i] - mu));
    const double w = n * (xbar - mu) * (xbar - mu) + s.value() / n;
    const double ratio = static_cast<double>(b) / n;
    return 16.0 * ratio * (1.0 + ratio) * w;
}

}  // namespace convsub
