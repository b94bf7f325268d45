#include "convsub/spatial.hpp"

#include <array>
#include <cmath>

namespace convsub {

namespace {

// floor with slack for products such as 0.29 * 100 landing just below 29.
long floor_slack(double x) { return static_cast<long>(std::floor(x + 1e-9)); }

SiteRange half_open_sites(double half_width, long shift) {
    // (-w, w] cap Z = {floor(-w) + 1, ..., floor(w)}
    return {floor_slack(-half_width) + 1 + shift, floor_slack(half_width) + shift};
}

std::array<std::size_t, 3> padded(const std::vector<std::size_t>& v) {
    std::array<std::size_t, 3> out{1, 1, 1};
    const std::size_t pad = 3 - v.size();
    for (std::size_t a = 0; a < v.size(); ++a) out[pad + a] = v[a];
    return out;
}

}  // namespace

LatticeField::LatticeField(std::vector<std::size_t> extent, Vector values, std::vector<long> origin)
    : extent_(std::move(extent)), origin_(std::move(origin)), values_(std::move(values)) {
    if (extent_.empty() || extent_.size() > 3)
        throw Error(ErrorCode::InvalidGeometry, "field dimension must be 1, 2 or 3");
    std::size_t total = 1;
    for (auto e : extent_) {
        if (e == 0) throw Error(ErrorCode::InvalidGeometry, "field extents must be positive");
        total *= e;
    }
    if (static_cast<std::size_t>(values_.size()) != total)
        throw Error(ErrorCode::InvalidGeometry, "field has " + std::to_string(values_.size()) + " values, extent product is " +
                                                    std::to_string(total));
    require_finite(values_, "field");
    if (origin_.empty()) {
        for (auto e : extent_) origin_.push_back(-static_cast<long>((e - 1) / 2));
    } else if (origin_.size() != extent_.size()) {
        throw Error(ErrorCode::InvalidGeometry, "origin dimension does not match the field");
    }
}

double LatticeField::at(const std::vector<std::size_t>& index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < extent_.size(); ++a) flat = flat * extent_[a] + index[a];
    return values_[static_cast<Eigen::Index>(flat)];
}

RectGeometry RectGeometry::cube(std::size_t d, double lambda, double b) {
    return {lambda, std::vector<double>(d, 0.5), std::vector<double>(d, 0.5), b, {}};
}

void RectGeometry::validate() const {
    const std::size_t d = region_half.size();
    if (d == 0 || d > 3) throw Error(ErrorCode::InvalidGeometry, "geometry dimension must be 1, 2 or 3");
    if (template_half.size() != d || (!offset.empty() && offset.size() != d))
        throw Error(ErrorCode::InvalidGeometry, "region, template and offset dimensions differ");
    if (!(lambda > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidGeometry, "lambda and b must be positive");
    for (std::size_t a = 0; a < d; ++a) {
        if (!(region_half[a] > 0.0 && region_half[a] <= 0.5) || !(template_half[a] > 0.0 && template_half[a] <= 0.5))
            throw Error(ErrorCode::InvalidGeometry, "half-widths must lie in (0, 1/2]");
    }
}

std::vector<SiteRange> region_sites(const RectGeometry& geom) {
    geom.validate();
    std::vector<SiteRange> out;
    for (std::size_t a = 0; a < geom.dim(); ++a)
        out.push_back(half_open_sites(geom.lambda * geom.region_half[a], geom.offset.empty() ? 0 : geom.offset[a]));
    return out;
}

std::vector<SiteRange> template_sites(const RectGeometry& geom) {
    geom.validate();
    std::vector<SiteRange> out;
    for (std::size_t a = 0; a < geom.dim(); ++a) out.push_back(half_open_sites(geom.b * geom.template_half[a], 0));
    return out;
}

TranslateSet spatial_index_set(const RectGeometry& geom) {
    const auto region = region_sites(geom);
    const auto tmpl = template_sites(geom);
    const std::size_t d = geom.dim();
    std::vector<SiteRange> shifts(d);
    long total = 1;
    for (std::size_t a = 0; a < d; ++a) {
        if (region[a].size() <= 0 || tmpl[a].size() <= 0)
            throw Error(ErrorCode::EmptyIndexSet, "region or template contains no lattice sites");
        shifts[a] = {region[a].lo - tmpl[a].lo, region[a].hi - tmpl[a].hi};
        if (shifts[a].size() <= 0)
            throw Error(ErrorCode::EmptyIndexSet, "template b*D_0 does not fit inside the sampling region");
        total *= shifts[a].size();
    }
    TranslateSet out(total, static_cast<Eigen::Index>(d));
    std::vector<long> cur(d);
    for (std::size_t a = 0; a < d; ++a) cur[a] = shifts[a].lo;
    for (long row = 0; row < total; ++row) {
        for (std::size_t a = 0; a < d; ++a) out(row, static_cast<Eigen::Index>(a)) = cur[a];
        for (std::size_t a = d; a-- > 0;) {
            if (++cur[a] <= shifts[a].hi) break;
            cur[a] = shifts[a].lo;
        }
    }
    return out;
}

SubsamplingEstimate spatial_subsample_estimate(const LatticeField& field, const RectGeometry& geom) {
    if (field.dim() != geom.dim()) throw Error(ErrorCode::InvalidGeometry, "field and geometry dimensions differ");
    const auto region = region_sites(geom);
    const auto tmpl = template_sites(geom);
    const TranslateSet translates = spatial_index_set(geom);
    const std::size_t d = field.dim();

    // Region as an index box into the field array.
    std::vector<std::size_t> start(d), box(d);
    for (std::size_t a = 0; a < d; ++a) {
        const long lo = region[a].lo - field.origin()[a];
        const long hi = region[a].hi - field.origin()[a];
        if (lo < 0 || hi >= static_cast<long>(field.extent()[a]))
            throw Error(ErrorCode::MissingSites, "field does not cover sites " + std::to_string(region[a].lo) + ".." +
                                                     std::to_string(region[a].hi) + " on axis " + std::to_string(a));
        start[a] = static_cast<std::size_t>(lo);
        box[a] = static_cast<std::size_t>(hi - lo + 1);
    }

    // Region values in row-major order.
    const auto e = padded(box);
    const std::size_t n = e[0] * e[1] * e[2];
    Vector region_values(static_cast<Eigen::Index>(n));
    {
        std::vector<std::size_t> idx(d);
        for (std::size_t flat = 0; flat < n; ++flat) {
            std::size_t r = flat;
            for (std::size_t a = d; a-- > 0;) {
                idx[a] = start[a] + r % box[a];
                r /= box[a];
            }
            region_values[static_cast<Eigen::Index>(flat)] = field.at(idx);
        }
    }
    const double mean = compensated_mean(region_values);

    // Summed-area table of centered values, padded to 3 axes, one guard layer.
    const std::size_t s1 = e[2] + 1, s0 = (e[1] + 1) * s1;
    std::vector<long double> sat((e[0] + 1) * s0, 0.0L);
    for (std::size_t i = 0; i < e[0]; ++i)
        for (std::size_t j = 0; j < e[1]; ++j)
            for (std::size_t k = 0; k < e[2]; ++k) {
                const long double v = region_values[static_cast<Eigen::Index>((i * e[1] + j) * e[2] + k)] - mean;
                const std::size_t p = (i + 1) * s0 + (j + 1) * s1 + (k + 1);
                sat[p] = v + sat[p - s0] + sat[p - s1] + sat[p - 1] - sat[p - s0 - s1] - sat[p - s0 - 1] -
                         sat[p - s1 - 1] + sat[p - s0 - s1 - 1];
            }
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return sat[i * s0 + j * s1 + k]; };

    std::size_t n_b = 1;
    std::vector<long> tlo(d), tsize(d);
    for (std::size_t a = 0; a < d; ++a) {
        tlo[a] = tmpl[a].lo - region[a].lo;  // template start relative to the region box at translate 0
        tsize[a] = tmpl[a].size();
        n_b *= static_cast<std::size_t>(tsize[a]);
    }
    const std::size_t pad = 3 - d;
    const double scale = std::sqrt(static_cast<double>(n_b));
    Vector atoms(translates.rows());
    for (Eigen::Index row = 0; row < translates.rows(); ++row) {
        std::array<std::size_t, 3> lo{0, 0, 0}, hi{1, 1, 1};
        for (std::size_t a = 0; a < d; ++a) {
            lo[pad + a] = static_cast<std::size_t>(translates(row, static_cast<Eigen::Index>(a)) + tlo[a]);
            hi[pad + a] = lo[pad + a] + static_cast<std::size_t>(tsize[a]);
        }
        const long double sum = at(hi[0], hi[1], hi[2]) - at(lo[0], hi[1], hi[2]) - at(hi[0], lo[1], hi[2]) -
                                at(hi[0], hi[1], lo[2]) + at(lo[0], lo[1], hi[2]) + at(lo[0], hi[1], lo[2]) +
                                at(hi[0], lo[1], lo[2]) - at(lo[0], lo[1], lo[2]);
        atoms[row] = scale * static_cast<double>(sum / static_cast<long double>(n_b));
    }
    return make_estimate(std::move(atoms), n, n_b, scale, mean);
}

}  // namespace convsub
