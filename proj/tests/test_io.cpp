#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "convsub/io.hpp"

using namespace convsub;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ConfigInvalid;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("convsub_io_" + name)).string();
}

}  // namespace

TEST_CASE("series parsing") {
    const Vector v = io::parse_series("# header\n1.5\n\n-2e3  # trailing\n  7\n");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.5);
    CHECK(v[1] == -2000.0);
    CHECK(v[2] == 7.0);

    CHECK(code_of([] { io::parse_series("1\nabc\n"); }) == ErrorCode::ParseFailure);
    CHECK(code_of([] { io::parse_series("1 2\n"); }) == ErrorCode::ParseFailure);
    CHECK(code_of([] { io::parse_series("# nothing\n"); }) == ErrorCode::EmptyInput);
    CHECK(code_of([] { io::parse_series("nan\n"); }) != ErrorCode::ConfigInvalid);
    try {
        io::parse_series("1\n2\nx\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("series round trip is exact") {
    Rng rng(5);
    Vector x(200);
    for (auto& v : x) v = rng.normal() * std::pow(10.0, rng.normal() * 5);
    CHECK(io::parse_series(io::format_series(x)) == x);

    const std::string path = temp_path("series.txt");
    io::write_series(path, x);
    CHECK(io::read_series(path) == x);
    std::filesystem::remove(path);
    CHECK(code_of([] { io::read_series("/nonexistent/dir/file"); }) == ErrorCode::IoFailure);
}

TEST_CASE("field round trip") {
    Rng rng(6);
    Vector v(24);
    for (auto& x : v) x = rng.normal();
    const LatticeField f({2, 3, 4}, v);
    const LatticeField g = io::parse_field(io::format_field(f));
    CHECK(g.extent() == f.extent());
    CHECK(g.values() == f.values());
    CHECK(g.origin() == f.origin());

    CHECK(io::parse_field("2 2 2\n1 2\n3 4\n").values().size() == 4);
    CHECK(code_of([] { io::parse_field("2 2 2\n1 2 3\n"); }) == ErrorCode::ParseFailure);
    CHECK(code_of([] { io::parse_field("4 1 1 1 1\n1\n"); }) != ErrorCode::ConfigInvalid);
}

TEST_CASE("quantiles") {
    Vector s(5);
    s << 1, 2, 3, 4, 5;
    CHECK(io::quantile_sorted(s, 0.5) == 3.0);
    CHECK(io::quantile_sorted(s, 0.0) == 1.0);
    CHECK(io::quantile_sorted(s, 1.0) == 5.0);
    CHECK(io::quantile_sorted(s, 0.1) == doctest::Approx(1.4));
}

TEST_CASE("estimate JSON round trip") {
    Vector x(30);
    for (int i = 0; i < 30; ++i) x[i] = std::sin(i * 0.7) + i * 0.01;
    const auto e = subsample_estimate(x, 4, Statistic::mean(), ScalingLaw(0.8));
    const auto j = io::estimate_to_json(e);
    CHECK(j.at("n") == 30);
    CHECK(j.at("b") == 4);
    CHECK(j.contains("quantiles"));
    const auto back = io::estimate_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.atoms == e.atoms);
    CHECK(back.n == e.n);
    CHECK(back.b == e.b);
    CHECK(back.tau_b == e.tau_b);
    CHECK(back.m_sub == e.m_sub);
    CHECK(back.var_sub == e.var_sub);
    CHECK(io::distribution_from_json(j).atoms() == e.distribution().atoms());
    CHECK(code_of([] { io::estimate_from_json(nlohmann::json::object()); }) == ErrorCode::ParseFailure);
}
