#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "convsub/empirical.hpp"

using namespace convsub;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    std::copy(xs.begin(), xs.end(), v.begin());
    return v;
}

Vector random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

// Brute-force KS: evaluate both CDFs by counting at every atom and just
// below it.
double ks_brute(const Vector& a, const Vector& b) {
    std::vector<double> probes;
    for (const Vector* v : {&a, &b})
        for (double x : *v) {
            probes.push_back(x);
            probes.push_back(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        }
    double best = 0.0;
    for (double x : probes) {
        const double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double y) { return y <= x; })) / a.size();
        const double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double y) { return y <= x; })) / b.size();
        best = std::max(best, std::abs(fa - fb));
    }
    return best;
}

// Minimum RMS over every bijection of two equal-size atom lists.
double d2_brute(Vector x, Vector y) {
    std::vector<int> perm(static_cast<std::size_t>(x.size()));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i) s += (x[i] - y[perm[i]]) * (x[i] - y[perm[i]]);
        best = std::min(best, s / x.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(best);
}

}  // namespace

TEST_CASE("build_empirical sorts and keeps duplicates") {
    CHECK(build_empirical(vec({3, 1, 2})).atoms() == vec({1, 2, 3}));
    const auto single = build_empirical(vec({0}));
    CHECK(single.count() == 1);
    CHECK(single.atoms()[0] == 0.0);
    CHECK(build_empirical(vec({1, 1, 2})).atoms() == vec({1, 1, 2}));
}

TEST_CASE("build_empirical rejects empty and non-finite input") {
    try {
        build_empirical(Vector());
        FAIL("expected EmptyInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
    try {
        build_empirical(vec({1.0, std::numeric_limits<double>::quiet_NaN(), 2.0}));
        FAIL("expected NonFiniteValue");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteValue);
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("cdf is a right-continuous step function") {
    const auto d = build_empirical(vec({1, 2, 3}));
    CHECK(cdf(d, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(cdf(d, 0.5) == 0.0);
    CHECK(cdf(d, 1e300) == 1.0);
    CHECK(cdf(build_empirical(vec({1, 1, 2})), 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(cdf_left(d, 2.0) == doctest::Approx(1.0 / 3.0));

    Rng rng(11);
    const auto r = build_empirical(random_vector(rng, 200));
    double prev = 0.0;
    for (double x = -4.0; x <= 4.0; x += 0.01) {
        const double f = cdf(r, x);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("central moments") {
    CHECK(central_moment(build_empirical(vec({-1, 0, 1})), 2) == doctest::Approx(2.0 / 3.0));
    CHECK(central_moment(build_empirical(vec({-1, 0, 1})), 3) == doctest::Approx(0.0));
    CHECK(central_moment(build_empirical(vec({0, 0, 0, 4})), 2) == doctest::Approx(3.0));
    CHECK(std::abs(central_moment(build_empirical(vec({0.1, 0.7, 5.3})), 1)) < 1e-15);
    CHECK_THROWS_AS(central_moment(build_empirical(vec({1})), 5), Error);
    CHECK_THROWS_AS(central_moment(build_empirical(vec({1})), 0), Error);

    CHECK(central_moment(build_empirical(vec({2.5, 2.5, 2.5})), 2) == 0.0);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) CHECK(central_moment(random_vector(rng, 1 + t), 2) >= 0.0);
}

TEST_CASE("ks_to_normal") {
    const int m = 1000;
    Vector q(m);
    for (int i = 0; i < m; ++i) q[i] = normal_quantile((i + 0.5) / m);
    CHECK(ks_to_normal(build_empirical(q), 1.0) <= 1.0 / (2 * m) + 1e-6);
    CHECK(ks_to_normal(build_empirical(vec({0})), 1.0) == doctest::Approx(0.5));
    CHECK(ks_to_normal(build_empirical(q.array() + 10.0), 1.0) >= 0.999);
    CHECK_THROWS_AS(ks_to_normal(build_empirical(q), 0.0), Error);

    // Against a dense evaluation of both one-sided gaps.
    Rng rng(5);
    const Vector x = random_vector(rng, 40, 1.3);
    const auto d = build_empirical(x);
    double brute = 0.0;
    for (double a : x) {
        const double phi = normal_cdf(a / 2.0);
        brute = std::max({brute, std::abs(cdf(d, a) - phi), std::abs(cdf_left(d, a) - phi)});
    }
    CHECK(ks_to_normal(d, 2.0) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("normal_cdf accuracy at reference points") {
    // Reference values from a 50-digit evaluation.
    CHECK(std::abs(normal_cdf(0.0) - 0.5) < 1e-15);
    CHECK(std::abs(normal_cdf(1.0) - 0.8413447460685429) < 1e-15);
    CHECK(std::abs(normal_cdf(-1.96) - 0.024997895148220435) < 1e-15);
    CHECK(std::abs(normal_cdf(3.5) - 0.9997673709209645) < 1e-15);
    for (double p : {1e-10, 0.001, 0.3, 0.5, 0.9, 0.999999}) CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("ks_between") {
    const auto f = build_empirical(vec({0, 1}));
    CHECK(ks_between(f, f) == 0.0);
    CHECK(ks_between(build_empirical(vec({0})), build_empirical(vec({1}))) == 1.0);
    CHECK(ks_between(f, build_empirical(vec({0, 2}))) == doctest::Approx(0.5));

    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        const Vector a = random_vector(rng, 1 + t % 7);
        const Vector b = random_vector(rng, 1 + t % 5).array().round() * 0.5;  // ties
        const auto fa = build_empirical(a), fb = build_empirical(b);
        CHECK(ks_between(fa, fb) == doctest::Approx(ks_brute(a, b)));
        CHECK(ks_between(fa, fb) == ks_between(fb, fa));
    }
}

TEST_CASE("ks_between tolerance absorbs rounding only") {
    const auto f = build_empirical(vec({0.0, 1.0, 2.0}));
    const auto g = build_empirical(vec({1e-15, 1.0 - 1e-15, 2.0}));
    CHECK(ks_between(f, g) == doctest::Approx(1.0 / 3.0));
    CHECK(ks_between(f, g, 1e-12) == 0.0);
    CHECK(ks_between(f, build_empirical(vec({0.0, 1.1, 2.0})), 1e-12) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("mallows_d2 examples") {
    const auto f = build_empirical(vec({0, 1}));
    CHECK(mallows_d2(f, f) == 0.0);
    CHECK(mallows_d2(build_empirical(vec({-1.5})), build_empirical(vec({2.0}))) == doctest::Approx(3.5));
    CHECK(mallows_d2(f, build_empirical(vec({1, 2}))) == doctest::Approx(1.0));
}

TEST_CASE("mallows_d2 equals the brute-force optimal coupling") {
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        const Eigen::Index m = 1 + t % 4;
        const Vector x = random_vector(rng, m), y = random_vector(rng, m, 2.0);
        CHECK(std::abs(mallows_d2(build_empirical(x), build_empirical(y)) - d2_brute(x, y)) <= 1e-12);
    }
}

TEST_CASE("mallows_d2 with unequal counts matches the replicated-atom form") {
    // Repeating every atom L/m times leaves the law unchanged; equal counts
    // then reduce to sorted pairing.
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index m = 2 + t % 3, n = 3 + t % 4;
        const Vector x = random_vector(rng, m), y = random_vector(rng, n);
        const Eigen::Index l = std::lcm(m, n);
        Vector xs(l), ys(l);
        Vector sx = x, sy = y;
        std::sort(sx.begin(), sx.end());
        std::sort(sy.begin(), sy.end());
        for (Eigen::Index i = 0; i < l; ++i) {
            xs[i] = sx[i / (l / m)];
            ys[i] = sy[i / (l / n)];
        }
        const double expected = std::sqrt((xs - ys).squaredNorm() / static_cast<double>(l));
        CHECK(mallows_d2(build_empirical(x), build_empirical(y)) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("mallows_d2 is a metric on random triples") {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const auto a = build_empirical(random_vector(rng, 1 + t % 9));
        const auto b = build_empirical(random_vector(rng, 1 + t % 6, 1.5));
        const auto c = build_empirical(random_vector(rng, 1 + t % 4, 0.5));
        CHECK(mallows_d2(a, c) <= mallows_d2(a, b) + mallows_d2(b, c) + 1e-9);
        CHECK(mallows_d2(a, b) == doctest::Approx(mallows_d2(b, a)).epsilon(1e-14));
        CHECK(mallows_d2(a, a) == 0.0);
    }
}

TEST_CASE("sample") {
    Rng rng(1);
    CHECK(sample(build_empirical(vec({5})), rng, 3) == vec({5, 5, 5}));

    const auto coin = build_empirical(vec({0, 1}));
    CHECK(std::abs(sample(coin, rng, 100000).mean() - 0.5) < 0.01);

    Rng r1(42), r2(42);
    CHECK(sample(coin, r1, 50) == sample(coin, r2, 50));
}
