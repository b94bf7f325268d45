#include <doctest.h>

#include <cmath>
#include <map>

#include "convsub/bootstrap.hpp"
#include "convsub/processes.hpp"

using namespace convsub;

namespace {

Vector range_series(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    return v;
}

// Brute-force bootstrap law: enumerate every block tuple, concatenate the
// blocks and average the pseudo-series directly.
Vector brute_mbb(const Vector& x, std::size_t b, std::size_t k, double alpha) {
    const std::size_t nb = static_cast<std::size_t>(x.size()) - b + 1;
    double e_star = 0.0;
    for (std::size_t i = 0; i < nb; ++i) e_star += x.segment(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)).mean();
    e_star /= static_cast<double>(nb);
    const double n1 = static_cast<double>(k * b);
    const double pre = std::pow(static_cast<double>(b), (1.0 - alpha) / 2) * std::pow(n1, alpha / 2);
    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= nb;
    Vector out(static_cast<Eigen::Index>(total));
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t r = t;
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j, r /= nb) s += x.segment(static_cast<Eigen::Index>(r % nb), static_cast<Eigen::Index>(b)).sum();
        out[static_cast<Eigen::Index>(t)] = pre * (s / n1 - e_star);
    }
    return out;
}

Vector random_series(Rng& rng, int n) {
    Vector x(n);
    for (auto& v : x) v = rng.normal() + 0.5 * rng.exponential();
    return x;
}

}  // namespace

TEST_CASE("bootstrap spec and prefactor") {
    const auto s = make_bootstrap_spec(100, 7, std::nullopt);
    CHECK(s.k == 14);
    CHECK(s.resample_size() == 98);
    CHECK(make_bootstrap_spec(100, 7, 3).k == 3);
    CHECK_THROWS_AS(make_bootstrap_spec(10, 10, std::nullopt), Error);
    CHECK_THROWS_AS(make_bootstrap_spec(10, 2, 0), Error);

    const BootstrapSpec lrd{16, 5, 0.5};
    CHECK(bootstrap_prefactor(lrd) == doctest::Approx(2.0 * std::pow(80.0, 0.25)));
    CHECK(bootstrap_prefactor(lrd, BootstrapScaling::Unadjusted) == doctest::Approx(std::pow(80.0, 0.25)));
    const BootstrapSpec srd{16, 5, 1.0};
    CHECK(bootstrap_prefactor(srd) == doctest::Approx(std::sqrt(80.0)));
    CHECK(bootstrap_prefactor(srd, BootstrapScaling::Unadjusted) == bootstrap_prefactor(srd));
}

TEST_CASE("hand-computed replicate on 1..4") {
    const BlockBootstrap bb(range_series(4), {2, 2, 1.0});
    CHECK(bb.bootstrap_expectation() == doctest::Approx(2.5));
    CHECK(bb.block_count() == 3);
    // Blocks (1,1): X*bar = 1.5, T* = 2 * (1.5 - 2.5).
    CHECK(bb.block_deviations()[0] == doctest::Approx(-1.0));
    CHECK(2.0 * bb.block_deviations()[0] == doctest::Approx(-2.0));
}

TEST_CASE("mbb_exact on 1..4 gives the five-point law") {
    const auto law = mbb_exact(range_series(4), {2, 2, 1.0});
    std::map<long, int> counts;
    for (double a : law.atoms()) ++counts[std::lround(a * 1e9)];
    const std::map<long, int> expected{{-2000000000, 1}, {-1000000000, 2}, {0, 3}, {1000000000, 2}, {2000000000, 1}};
    CHECK(counts == expected);
}

TEST_CASE("mbb_distribution on 1..4 is close to the exact law") {
    const Vector x = range_series(4);
    const BootstrapSpec spec{2, 2, 1.0};
    const auto mc = mbb_distribution(x, spec, 100000, 7);
    CHECK(ks_between(mc, mbb_exact(x, spec), 1e-9) <= 0.01);
    CHECK(mbb_distribution(x, spec, 100000, 7).atoms() == mc.atoms());
    CHECK(mbb_distribution(x, spec, 100000, 7, BootstrapScaling::Corrected, 4).atoms() == mc.atoms());
}

TEST_CASE("constant series gives a point mass at zero") {
    const Vector c = Vector::Constant(20, 3.3);
    const BootstrapSpec spec{4, 3, 0.7};
    CHECK(mbb_exact(c, spec).atoms().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mbb_distribution(c, spec, 500, 1).atoms().cwiseAbs().maxCoeff() < 1e-12);
    Rng rng(1);
    CHECK(std::abs(mbb_replicate(c, spec, rng)) < 1e-12);
}

TEST_CASE("mbb_exact agrees with direct resampling") {
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
        const Vector x = random_series(rng, 9 + t);
        for (double alpha : {1.0, 0.6}) {
            const std::size_t b = 2 + t % 3, k = 1 + t % 3;
            Vector brute = brute_mbb(x, b, k, alpha);
            std::sort(brute.begin(), brute.end());
            const auto law = mbb_exact(x, {b, k, alpha});
            CHECK((law.atoms() - brute).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("k = 1 reduces to scaled block means") {
    const Vector x = range_series(7);
    const auto law = mbb_exact(x, {3, 1, 1.0});
    Vector expected(5);
    for (int i = 0; i < 5; ++i) expected[i] = std::sqrt(3.0) * (i + 2.0 - 4.0);
    CHECK((law.atoms() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mbb_replicate matches the class draw") {
    const Vector x = range_series(10);
    const BootstrapSpec spec{3, 4, 1.0};
    const BlockBootstrap bb(x, spec);
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(mbb_replicate(x, spec, a) == bb.draw(b));
}

TEST_CASE("exact bootstrap equals convolution of centered block atoms") {
    CHECK(equivalence_gap(range_series(4), 2, 2, 1.0) == 0.0);
    CHECK(equivalence_gap(range_series(9), 1, 3, 1.0) == 0.0);
    Rng rng(41);
    for (int t = 0; t < 25; ++t) {
        const Vector x = random_series(rng, 8 + t % 9);
        CHECK(equivalence_gap(x, 2 + t % 2, 2 + (t / 2) % 2, 1.0) <= 1e-12);
    }
    const Vector x12 = random_series(rng, 12);
    CHECK(equivalence_gap(x12, 3, 2, 1.0) == 0.0);
}

TEST_CASE("equivalence holds for long-memory scaling when b == k") {
    Rng rng(43);
    for (int t = 0; t < 10; ++t) {
        const Vector x = random_series(rng, 10 + t);
        CHECK(equivalence_gap(x, 3, 3, 0.5) <= 1e-12);
        CHECK(equivalence_gap(x, 2, 2, 0.8) <= 1e-12);
    }
}

TEST_CASE("exact bootstrap variance") {
    Rng rng(47);
    for (int t = 0; t < 10; ++t) {
        const Vector x = random_series(rng, 12);
        for (double alpha : {1.0, 0.5}) {
            const BootstrapSpec spec{3, 3, alpha};
            const auto law = mbb_exact(x, spec);
            CHECK(central_moment(law, 2) == doctest::Approx(mbb_variance(x, spec)).epsilon(1e-10));
            CHECK(std::abs(law.mean()) < 1e-12);
            // At alpha = 1 this is the variance of the centered block-mean atoms.
            if (alpha == 1.0) {
                const BlockBootstrap bb(x, spec);
                const Vector atoms = std::sqrt(3.0) * bb.block_deviations();
                CHECK(central_moment(law, 2) == doctest::Approx(central_moment(atoms, 2)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("centering gap is small but reported") {
    Rng rng(53);
    const Vector x = random_series(rng, 14);
    const double gap = centering_gap(x, 3, 2, 1.0);
    CHECK(gap >= 0.0);
    CHECK(gap <= 1.0);
    CHECK(centering_gap(range_series(4), 2, 2, 1.0) <= 1e-12);
}

TEST_CASE("unadjusted scaling shrinks the variance by b^(alpha-1)") {
    Rng rng(59);
    const Vector x = random_series(rng, 400);
    const BootstrapSpec spec{16, 25, 0.5};
    const double ratio = mbb_variance(x, spec, BootstrapScaling::Unadjusted) / mbb_variance(x, spec);
    CHECK(ratio == doctest::Approx(std::pow(16.0, -0.5)).epsilon(1e-12));
}
