#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace convsub {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ErrorCode {
    EmptyInput,
    NonFiniteValue,
    UnsupportedOrder,
    NonPositiveSigma,
    WindowTooShort,
    BlockTooLarge,
    BlockTooSmall,
    EnumerationTooLarge,
    EmptyIndexSet,
    MissingSites,
    InvalidGeometry,
    ParameterOutOfRange,
    ConfigInvalid,
    ParseFailure,
    IoFailure,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` lets callers branch
/// (the CLI maps codes onto exit statuses).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }
    double hi() const noexcept { return sum_; }
    double lo() const noexcept { return comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(const VectorRef& v) {
    CompensatedSum s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s.add(v[i]);
    return s.value();
}

inline double compensated_mean(const VectorRef& v) { return compensated_sum(v) / static_cast<double>(v.size()); }

/// SplitMix64 finalizer; used to derive independent seeds from counters.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream `(a, b)` under `root`. Stable across worker counts and
/// across additions of unrelated streams.
constexpr std::uint64_t substream_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix64(mix64(mix64(root) ^ a) ^ mix64(b + 0x632be59bd9b4e019ULL));
}

/// Seeded random stream. Distributions are libstdc++'s, so streams are
/// reproducible for a fixed toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    static Rng substream(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
        return Rng(substream_seed(root, a, b));
    }

    /// Uniform integer on [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double normal() { return normal_(engine_); }
    double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

void require_finite(const VectorRef& values, const char* what);

}  // namespace convsub
