#include "convsub/processes.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <unsupported/Eigen/FFT>

namespace convsub {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void out_of_range(const std::string& what) { throw Error(ErrorCode::ParameterOutOfRange, what); }

double innovation(Innovation kind, Rng& rng) {
    return kind == Innovation::Gaussian ? rng.normal() : rng.exponential() - 1.0;
}

void validate_base(const BaseProcess& base) {
    std::visit(Overloaded{
                   [](const AR1Process& p) {
                       if (!(std::abs(p.phi) < 1.0)) out_of_range("AR(1) requires |phi| < 1");
                       if (!(p.sigma_eps > 0.0)) out_of_range("sigma_eps must be positive");
                   },
                   [](const LinearLRDProcess& p) {
                       if (!(p.beta > 0.5 && p.beta < 1.0)) out_of_range("linear LRD requires beta in (1/2, 1)");
                       if (p.truncation < 1000) out_of_range("linear LRD truncation J must be >= 1000");
                       if (!(p.sigma_eps > 0.0)) out_of_range("sigma_eps must be positive");
                   },
                   [](const HeteroIndepProcess& p) {
                       if (p.variances.empty()) out_of_range("variance pattern is empty");
                       for (double v : p.variances)
                           if (!(v > 0.0) || !std::isfinite(v)) out_of_range("variance pattern must be strictly positive");
                   },
                   [](const ConstantProcess& p) {
                       if (!std::isfinite(p.value)) out_of_range("constant must be finite");
                   },
               },
               base);
}

Vector generate_ar1(const AR1Process& p, std::size_t n, Rng& rng) {
    const auto burn = static_cast<std::size_t>(std::ceil(10.0 / (1.0 - std::abs(p.phi))));
    Vector out(static_cast<Eigen::Index>(n));
    double x = 0.0;
    for (std::size_t t = 0; t < burn + n; ++t) {
        x = p.phi * x + p.sigma_eps * innovation(p.innovation, rng);
        if (t >= burn) out[static_cast<Eigen::Index>(t - burn)] = x;
    }
    return out;
}

// Spectrum of the filter (1 + j)^{-beta}, j = 0..J, at a given FFT size.
const std::vector<std::complex<double>>& filter_spectrum(double beta, std::size_t taps, std::size_t size) {
    static std::mutex mutex;
    static std::map<std::tuple<double, std::size_t, std::size_t>, std::vector<std::complex<double>>> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(beta, taps, size);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (cache.size() > 8) cache.clear();
    std::vector<double> a(size, 0.0);
    for (std::size_t j = 0; j < taps; ++j) a[j] = std::pow(1.0 + static_cast<double>(j), -beta);
    std::vector<std::complex<double>> spec;
    Eigen::FFT<double> fft;
    fft.fwd(spec, a);
    return cache.emplace(key, std::move(spec)).first->second;
}

Vector generate_lrd(const LinearLRDProcess& p, std::size_t n, Rng& rng) {
    const std::size_t taps = p.truncation + 1;
    const std::size_t len = n + p.truncation;  // J warm-up innovations
    std::size_t size = 1;
    while (size < len + taps) size <<= 1;
    std::vector<double> noise(size, 0.0);
    for (std::size_t t = 0; t < len; ++t) noise[t] = innovation(p.innovation, rng);

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, noise);
    const auto& filt = filter_spectrum(p.beta, taps, size);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= filt[i];
    std::vector<double> conv;
    fft.inv(conv, spec);

    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) out[static_cast<Eigen::Index>(t)] = p.mu + p.sigma_eps * conv[t + p.truncation];
    return out;
}

Vector generate_hetero(const HeteroIndepProcess& p, std::size_t n, Rng& rng) {
    Vector out(static_cast<Eigen::Index>(n));
    std::vector<double> sd;
    for (double v : p.variances) sd.push_back(std::sqrt(v));
    for (std::size_t i = 0; i < n; ++i)
        out[static_cast<Eigen::Index>(i)] = p.mu + sd[i % sd.size()] * innovation(p.innovation, rng);
    return out;
}

Vector generate_base(const BaseProcess& base, std::size_t n, Rng& rng) {
    return std::visit(Overloaded{
                          [&](const AR1Process& p) { return generate_ar1(p, n, rng); },
                          [&](const LinearLRDProcess& p) { return generate_lrd(p, n, rng); },
                          [&](const HeteroIndepProcess& p) { return generate_hetero(p, n, rng); },
                          [&](const ConstantProcess& p) { return Vector(Vector::Constant(static_cast<Eigen::Index>(n), p.value)); },
                      },
                      base);
}

}  // namespace

bool is_spatial(const ProcessSpec& spec) { return std::holds_alternative<SpatialMAProcess>(spec); }

void validate(const ProcessSpec& spec) {
    std::visit(Overloaded{
                   [](const APCProcess& p) {
                       validate_base(p.base);
                       if (p.period < 1) out_of_range("APC period must be a positive integer");
                       if (!std::isfinite(p.amplitude)) out_of_range("APC amplitude must be finite");
                   },
                   [](const SpatialMAProcess& p) {
                       if (p.extent.empty() || p.extent.size() > 3) out_of_range("spatial MA dimension must be 1, 2 or 3");
                       for (auto e : p.extent)
                           if (e == 0) out_of_range("spatial MA extents must be positive");
                       if (p.radius < 0) out_of_range("spatial MA radius must be >= 0");
                       if (!(p.sigma_eps > 0.0)) out_of_range("sigma_eps must be positive");
                   },
                   [](const auto& p) { validate_base(BaseProcess(p)); },
               },
               spec);
}

Vector generate_series(const ProcessSpec& spec, std::size_t n, Rng& rng) {
    validate(spec);
    if (n == 0) out_of_range("series length must be positive");
    return std::visit(Overloaded{
                          [&](const APCProcess& p) {
                              Vector x = generate_base(p.base, n, rng);
                              const double w = 2.0 * std::numbers::pi / static_cast<double>(p.period);
                              for (std::size_t t = 0; t < n; ++t)
                                  x[static_cast<Eigen::Index>(t)] +=
                                      p.amplitude * std::cos(w * static_cast<double>((t + 1) % static_cast<std::size_t>(p.period)));
                              return x;
                          },
                          [&](const SpatialMAProcess&) -> Vector {
                              out_of_range("spatial MA produces a field; use generate_field");
                          },
                          [&](const auto& p) { return generate_base(BaseProcess(p), n, rng); },
                      },
                      spec);
}

LatticeField generate_field(const SpatialMAProcess& spec, Rng& rng) {
    validate(ProcessSpec(spec));
    const std::size_t d = spec.extent.size();
    const auto r = static_cast<std::size_t>(spec.radius);
    std::vector<std::size_t> ext(d);
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) {
        ext[a] = spec.extent[a] + 2 * r;
        total *= ext[a];
    }
    std::vector<double> buf(total);
    for (auto& v : buf) v = spec.sigma_eps * rng.normal();

    // Separable box average: one moving window per axis, shrinking that axis
    // from ext[a] to extent[a].
    for (std::size_t a = 0; a < d; ++a) {
        std::size_t outer = 1, inner = 1;
        for (std::size_t q = 0; q < a; ++q) outer *= ext[q];
        for (std::size_t q = a + 1; q < d; ++q) inner *= ext[q];
        const std::size_t len = ext[a], out_len = spec.extent[a], width = 2 * r + 1;
        std::vector<double> next(outer * out_len * inner);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t in = 0; in < inner; ++in)
                for (std::size_t j = 0; j < out_len; ++j) {
                    double s = 0.0;
                    for (std::size_t w = 0; w < width; ++w) s += buf[(o * len + j + w) * inner + in];
                    next[(o * out_len + j) * inner + in] = s / static_cast<double>(width);
                }
        buf = std::move(next);
        ext[a] = out_len;
    }
    return LatticeField(spec.extent, Eigen::Map<Vector>(buf.data(), static_cast<Eigen::Index>(buf.size())));
}

double almost_periodic_mean(const std::function<double(long)>& f, long period) {
    if (period < 1) out_of_range("period must be a positive integer");
    CompensatedSum s;
    for (long t = 1; t <= period; ++t) s.add(f(t));
    return s.value() / static_cast<double>(period);
}

double lindeberg_term(const HeteroIndepProcess& spec, std::size_t b, double eps, std::size_t draws, Rng& rng) {
    validate(ProcessSpec(spec));
    const double cut = eps * std::sqrt(static_cast<double>(b));
    CompensatedSum total;
    for (double v : spec.variances) {
        const double sd = std::sqrt(v);
        CompensatedSum s;
        for (std::size_t i = 0; i < draws; ++i) {
            const double x = sd * innovation(spec.innovation, rng);
            if (std::abs(x) > cut) s.add(x * x);
        }
        total.add(s.value() / static_cast<double>(draws));
    }
    return total.value() / static_cast<double>(spec.variances.size());
}

}  // namespace convsub
