#pragma once

#include <cstddef>
#include <vector>

#include "convsub/common.hpp"
#include "convsub/subsampling.hpp"

namespace convsub {

/// Real field on a d-dimensional integer grid (1 <= d <= 3), row-major
/// (last axis fastest). Array index j along axis a maps to site j + origin[a].
class LatticeField {
public:
    /// Origin defaults to -floor((e - 1) / 2) per axis, which centers the
    /// array on the lattice the way lambda * (-1/2, 1/2]^d is centered.
    LatticeField(std::vector<std::size_t> extent, Vector values, std::vector<long> origin = {});

    std::size_t dim() const noexcept { return extent_.size(); }
    const std::vector<std::size_t>& extent() const noexcept { return extent_; }
    const std::vector<long>& origin() const noexcept { return origin_; }
    const Vector& values() const noexcept { return values_; }

    /// Value at array index (not site). No bounds checks.
    double at(const std::vector<std::size_t>& index) const;

private:
    std::vector<std::size_t> extent_;
    std::vector<long> origin_;
    Vector values_;
};

/// Sampling region offset + lambda * R_0 and template b * D_0, with R_0 and
/// D_0 axis-aligned boxes prod (-h_a, h_a], 0 < h_a <= 1/2.
struct RectGeometry {
    double lambda = 1.0;
    std::vector<double> region_half;    ///< R_0 half-widths
    std::vector<double> template_half;  ///< D_0 half-widths
    double b = 1.0;
    std::vector<long> offset;           ///< integer shift of the region; empty = origin

    /// R_0 = D_0 = (-1/2, 1/2]^d.
    static RectGeometry cube(std::size_t d, double lambda, double b);

    std::size_t dim() const noexcept { return region_half.size(); }
    void validate() const;
};

/// Inclusive lattice-site range [lo, hi] along one axis.
struct SiteRange {
    long lo = 0;
    long hi = -1;
    long size() const noexcept { return hi - lo + 1; }
};

/// Sites of offset + lambda * R_0 per axis.
std::vector<SiteRange> region_sites(const RectGeometry& geom);
/// Sites of b * D_0 (at translate 0) per axis.
std::vector<SiteRange> template_sites(const RectGeometry& geom);

/// Translates, one per row, in lexicographic order.
using TranslateSet = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// All integer i whose translated template sites i + (b D_0 cap Z^d) lie
/// among the region's sites. Throws EmptyIndexSet.
TranslateSet spatial_index_set(const RectGeometry& geom);

/// Atoms sqrt(n_b) (subregion mean - region mean) over spatial_index_set,
/// via a d-dimensional summed-area table. `n` is the number of region
/// sites and `b` is n_b. Throws MissingSites when the field does not cover
/// the region.
SubsamplingEstimate spatial_subsample_estimate(const LatticeField& field, const RectGeometry& geom);

}  // namespace convsub
