#include <doctest.h>

#include <cmath>
#include <numbers>

#include "convsub/processes.hpp"

using namespace convsub;

namespace {

double lag1_autocorrelation(const Vector& x) {
    const Vector c = x.array() - x.mean();
    const Eigen::Index n = c.size();
    return c.head(n - 1).dot(c.tail(n - 1)) / c.squaredNorm();
}

double sample_variance(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("AR(1) with phi = 0 is white noise") {
    Rng rng(1);
    const Vector x = generate_series(AR1Process{0.0, 1.0}, 100000, rng);
    CHECK(std::abs(lag1_autocorrelation(x)) <= 0.01);
    CHECK(std::abs(x.squaredNorm() / x.size() - 1.0) < 0.02);
}

TEST_CASE("AR(1) long-run variance") {
    const int seeds = 500;
    const std::size_t n = 20000;
    std::vector<double> means;
    for (int s = 0; s < seeds; ++s) {
        Rng rng = Rng::substream(127, static_cast<std::uint64_t>(s));
        means.push_back(generate_series(AR1Process{0.5, 1.0}, n, rng).mean());
    }
    const double lrv = static_cast<double>(n) * sample_variance(means);
    CHECK(lrv >= 3.4);
    CHECK(lrv <= 4.6);
}

TEST_CASE("AR(1) starts in the stationary law") {
    std::vector<double> first;
    for (int s = 0; s < 4000; ++s) {
        Rng rng = Rng::substream(131, static_cast<std::uint64_t>(s));
        first.push_back(generate_series(AR1Process{0.9, 1.0}, 2, rng)[0]);
    }
    // Stationary variance 1 / (1 - 0.81).
    CHECK(sample_variance(first) == doctest::Approx(1.0 / 0.19).epsilon(0.08));
}

TEST_CASE("long-memory variance slope") {
    const int reps = 200;
    const int levels = 6;
    std::vector<std::vector<double>> means(levels);
    const LinearLRDProcess spec{0.75, 100000, 1.0, 0.0};
    for (int r = 0; r < reps; ++r) {
        Rng rng = Rng::substream(137, static_cast<std::uint64_t>(r));
        const Vector x = generate_series(spec, std::size_t{1} << 15, rng);
        for (int l = 0; l < levels; ++l) means[l].push_back(x.head(Eigen::Index{1} << (10 + l)).mean());
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int l = 0; l < levels; ++l) {
        const double lx = std::log(std::ldexp(1.0, 10 + l));
        const double ly = std::log(sample_variance(means[l]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (levels * sxy - sx * sy) / (levels * sxx - sx * sx);
    MESSAGE("log-variance slope " << slope);
    CHECK(slope >= -0.6);
    CHECK(slope <= -0.4);
}

TEST_CASE("long-memory mean and innovation scale") {
    Rng rng(139);
    const LinearLRDProcess spec{0.75, 1000, 2.0, 5.0};
    const Vector x = generate_series(spec, 50000, rng);
    // Marginal variance sigma^2 * sum_{j<=J} (1+j)^{-2 beta}.
    double psi = 0.0;
    for (int j = 0; j <= 1000; ++j) psi += std::pow(1.0 + j, -1.5);
    CHECK(std::abs(x.mean() - 5.0) < 1.0);
    CHECK((x.array() - x.mean()).square().mean() == doctest::Approx(4.0 * psi).epsilon(0.1));
}

TEST_CASE("determinism") {
    const ProcessSpec specs[] = {AR1Process{0.3, 1.0}, LinearLRDProcess{0.8, 2000, 1.0, 0.0},
                                 HeteroIndepProcess{1.0, {0.5, 1.5}}, APCProcess{AR1Process{0.5, 1.0}, 2.0, 7},
                                 ConstantProcess{3.0}};
    for (const auto& spec : specs) {
        Rng a(7), b(7), c(8);
        const Vector x = generate_series(spec, 3000, a);
        CHECK(x == generate_series(spec, 3000, b));
        if (!std::holds_alternative<ConstantProcess>(spec)) CHECK(x != generate_series(spec, 3000, c));
    }
    Rng a(9), b(9);
    const SpatialMAProcess ma{{10, 12}, 1, 1.0};
    CHECK(generate_field(ma, a).values() == generate_field(ma, b).values());
}

TEST_CASE("parameter validation") {
    auto code = [](const ProcessSpec& s) {
        try {
            validate(s);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::EmptyInput;
    };
    CHECK(code(AR1Process{1.0, 1.0}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(AR1Process{0.5, 0.0}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(LinearLRDProcess{0.5, 10000}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(LinearLRDProcess{0.75, 999}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(HeteroIndepProcess{0.0, {1.0, 0.0}}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(HeteroIndepProcess{0.0, {}}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(APCProcess{AR1Process{}, 1.0, 0}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(SpatialMAProcess{{5, 5}, -1, 1.0}) == ErrorCode::ParameterOutOfRange);
    CHECK(code(SpatialMAProcess{{5, 5, 5, 5}, 0, 1.0}) == ErrorCode::ParameterOutOfRange);
    CHECK_NOTHROW(validate(APCProcess{LinearLRDProcess{}, 1.0, 5}));
    Rng rng(1);
    CHECK_THROWS_AS(generate_series(AR1Process{1.2, 1.0}, 10, rng), Error);
    CHECK_THROWS_AS(generate_series(SpatialMAProcess{{5}, 0, 1.0}, 10, rng), Error);
}

TEST_CASE("APC adds the periodic mean") {
    Rng rng(149);
    const Vector x = generate_series(APCProcess{ConstantProcess{0.0}, 2.0, 7}, 30, rng);
    for (int t = 1; t <= 30; ++t) CHECK(x[t - 1] == doctest::Approx(2.0 * std::cos(2 * std::numbers::pi * t / 7)).scale(1.0));
}

TEST_CASE("heteroscedastic pattern") {
    Rng rng(151);
    const Vector x = generate_series(HeteroIndepProcess{3.0, {0.5, 1.5}}, 200000, rng);
    double even = 0, odd = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) (i % 2 ? odd : even) += (x[i] - 3.0) * (x[i] - 3.0);
    CHECK(even / 100000 == doctest::Approx(0.5).epsilon(0.03));
    CHECK(odd / 100000 == doctest::Approx(1.5).epsilon(0.03));

    Rng r2(152);
    const Vector e = generate_series(HeteroIndepProcess{0.0, {1.0}, Innovation::Exponential}, 200000, r2);
    CHECK(std::abs(e.mean()) < 0.01);
    CHECK(skewness(e) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("spatial moving average") {
    Rng rng(157);
    const LatticeField f = generate_field(SpatialMAProcess{{60, 60}, 1, 3.0}, rng);
    CHECK(f.values().size() == 3600);
    // Box of 9 sites: variance 9 / 9.
    const Vector& v = f.values();
    CHECK((v.array() - v.mean()).square().mean() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("almost-periodic mean") {
    const double two_pi = 2 * std::numbers::pi;
    CHECK(std::abs(almost_periodic_mean([&](long t) { return std::cos(two_pi * t / 7); }, 7)) < 1e-15);
    CHECK(almost_periodic_mean([](long) { return 2.5; }, 3) == 2.5);
    CHECK(almost_periodic_mean([&](long t) { return 3 + std::cos(two_pi * t / 5); }, 5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(almost_periodic_mean([](long) { return 0.0; }, 0), Error);
}

TEST_CASE("Cesaro bound for a period-7 cosine") {
    const double two_pi = 2 * std::numbers::pi;
    for (long s = 1; s <= 50; ++s) {
        double sum = 0.0;
        for (long n = 1; n <= 500; ++n) {
            sum += std::cos(two_pi * static_cast<double>(s + n - 1) / 7);
            CHECK(std::abs(sum / n) <= 7.0 / n);
        }
    }
}

TEST_CASE("Lindeberg term shrinks with b") {
    const HeteroIndepProcess spec{0.0, {0.5, 1.5}};
    Rng rng(163);
    const double t10 = lindeberg_term(spec, 10, 0.5, 200000, rng);
    const double t100 = lindeberg_term(spec, 100, 0.5, 200000, rng);
    const double t1000 = lindeberg_term(spec, 1000, 0.5, 200000, rng);
    CHECK(t10 > t100);
    CHECK(t100 >= t1000);
    CHECK(t1000 < 1e-3);
}
