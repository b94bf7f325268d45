#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "convsub/common.hpp"
#include "convsub/spatial.hpp"

namespace convsub {

/// Innovation law, always standardized to mean 0 and variance 1 before
/// scaling by sigma_eps. Exponential gives skewness 2.
enum class Innovation { Gaussian, Exponential };

struct AR1Process {
    double phi = 0.0;
    double sigma_eps = 1.0;
    Innovation innovation = Innovation::Gaussian;

    bool operator==(const AR1Process&) const = default;
};

/// X_t = mu + sigma_eps * sum_{j=0}^{J} (1 + j)^{-beta} eps_{t-j}. Var of the
/// sample mean decays like n^{-alpha} with alpha = 2 beta - 1 while n << J.
struct LinearLRDProcess {
    double beta = 0.75;
    std::size_t truncation = 100'000;
    double sigma_eps = 1.0;
    double mu = 0.0;
    Innovation innovation = Innovation::Gaussian;

    bool operator==(const LinearLRDProcess&) const = default;
};

/// mu + sigma_i eps_i with sigma_i^2 = variances[i mod len].
struct HeteroIndepProcess {
    double mu = 0.0;
    std::vector<double> variances{1.0};
    Innovation innovation = Innovation::Gaussian;

    bool operator==(const HeteroIndepProcess&) const = default;
};

struct ConstantProcess {
    double value = 0.0;

    bool operator==(const ConstantProcess&) const = default;
};

using BaseProcess = std::variant<AR1Process, LinearLRDProcess, HeteroIndepProcess, ConstantProcess>;

/// base_t + amplitude * cos(2 pi t / period), t = 1, 2, ...
struct APCProcess {
    BaseProcess base;
    double amplitude = 1.0;
    long period = 7;

    bool operator==(const APCProcess&) const = default;
};

/// Average of iid N(0, sigma_eps^2) noise over the sup-norm ball of radius r
/// around each site.
struct SpatialMAProcess {
    std::vector<std::size_t> extent;
    long radius = 0;
    double sigma_eps = 1.0;

    bool operator==(const SpatialMAProcess&) const = default;
};

using ProcessSpec = std::variant<AR1Process, LinearLRDProcess, HeteroIndepProcess, ConstantProcess, APCProcess,
                                 SpatialMAProcess>;

bool is_spatial(const ProcessSpec& spec);

/// Throws ParameterOutOfRange on any violated parameter constraint.
void validate(const ProcessSpec& spec);

/// Time-series kinds. Recursive kinds discard 10 * max(1 / (1 - |phi|), J)
/// burn-in steps; the linear filter is J-dependent, so J prior innovations
/// already give an exactly stationary start and that is all it uses.
Vector generate_series(const ProcessSpec& spec, std::size_t n, Rng& rng);

/// Spatial kind.
LatticeField generate_field(const SpatialMAProcess& spec, Rng& rng);

/// Period average of an exactly p-periodic f, i.e. lim n^{-1} sum_{t<=n} f(t).
double almost_periodic_mean(const std::function<double(long)>& f, long period);

/// Monte Carlo estimate of n^{-1} sum_i E X_{i,mu}^2 1{|X_{i,mu}| > eps sqrt(b)}
/// over one period of the variance pattern, `draws` per pattern entry.
double lindeberg_term(const HeteroIndepProcess& spec, std::size_t b, double eps, std::size_t draws, Rng& rng);

}  // namespace convsub
