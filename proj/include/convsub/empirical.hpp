#pragma once

#include <cstddef>

#include "convsub/common.hpp"

namespace convsub {

/// Uniform-weight distribution over real atoms, stored sorted.
class EmpiricalDistribution {
public:
    /// Sorts a copy of `values`. Throws EmptyInput / NonFiniteValue.
    explicit EmpiricalDistribution(const VectorRef& values);

    const Vector& atoms() const noexcept { return atoms_; }
    std::size_t count() const noexcept { return static_cast<std::size_t>(atoms_.size()); }
    double min() const { return atoms_[0]; }
    double max() const { return atoms_[atoms_.size() - 1]; }
    double mean() const { return compensated_mean(atoms_); }

private:
    Vector atoms_;
};

EmpiricalDistribution build_empirical(const VectorRef& values);

/// Right-continuous step CDF: #(atoms <= x) / count.
double cdf(const EmpiricalDistribution& dist, double x);

/// Left limit P(X < x).
double cdf_left(const EmpiricalDistribution& dist, double x);

/// (1/count) * sum (atom - mean)^p for p in {1,2,3,4}.
double central_moment(const EmpiricalDistribution& dist, int p);
double central_moment(const VectorRef& atoms, int p);

/// mu_3 / mu_2^{3/2}; 0 for a degenerate distribution.
double skewness(const VectorRef& atoms);

/// Standard normal CDF from std::erfc. glibc's erfc is accurate to a few
/// ulp, well inside the 1e-12 absolute error the KS checks assume.
double normal_cdf(double x);

/// Inverse standard normal CDF (Acklam's rational approximation followed by
/// one Halley step against normal_cdf); ~1e-15 relative accuracy.
double normal_quantile(double p);

/// sup_x |F(x) - Phi(x / sigma)|, exact: both one-sided gaps at every
/// distinct atom.
double ks_to_normal(const EmpiricalDistribution& dist, double sigma);

/// sup_x |F(x) - G(x)| over the merged atom set.
///
/// With `atom_tol > 0` atoms closer than `atom_tol` are treated as the same
/// location, i.e. the result is sup_x max(F(x) - G(x + tol), G(x) - F(x + tol)).
/// This absorbs rounding when two laws are computed along different
/// arithmetic paths. `atom_tol = 0` is the plain KS distance.
double ks_between(const EmpiricalDistribution& f, const EmpiricalDistribution& g, double atom_tol = 0.0);

/// Mallows / Wasserstein-2 distance via the monotone quantile coupling on
/// the common refinement of both quantile grids.
double mallows_d2(const EmpiricalDistribution& f, const EmpiricalDistribution& g);

/// `m` iid uniform draws from the atoms.
Vector sample(const EmpiricalDistribution& dist, Rng& rng, std::size_t m);

}  // namespace convsub
