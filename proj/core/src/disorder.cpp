#include "alloylab/disorder.hpp"

#include <algorithm>
#include <cmath>

#include "alloylab/error.hpp"
#include "alloylab/seeding.hpp"

namespace alloylab {

namespace {

double sup_norm(const Point& r, int dim) noexcept {
    double m = 0.0;
    for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(r[static_cast<std::size_t>(k)]));
    return m;
}

double euclidean(const Point& r, int dim) noexcept {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += r[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)];
    return std::sqrt(s);
}

Point displacement(const Point& x, const Point& z) noexcept {
    return {x[0] - z[0], x[1] - z[1], x[2] - z[2]};
}

/// Lattice index range [lo, hi] of grid points strictly inside (c - r, c + r)
/// along one axis, clamped to the grid. Empty when lo > hi.
std::pair<int, int> index_span(const GridSpec& grid, double c, double r) {
    const double h = grid.spacing();
    const double origin = -0.5 * grid.side_length();
    // x_i = origin + (i + 1) h; widen by one and let the exact test decide.
    int lo = static_cast<int>(std::floor((c - r - origin) / h)) - 2;
    int hi = static_cast<int>(std::ceil((c + r - origin) / h));
    lo = std::max(lo, 0);
    hi = std::min(hi, grid.points_per_side() - 1);
    return {lo, hi};
}

template <class Visit>
void for_points_near(const GridSpec& grid, const Point& center, double radius, Visit&& visit) {
    const int d = grid.dim();
    std::array<std::pair<int, int>, 3> span{{{0, 0}, {0, 0}, {0, 0}}};
    for (int k = 0; k < d; ++k) {
        span[static_cast<std::size_t>(k)] = index_span(grid, center[static_cast<std::size_t>(k)], radius);
        if (span[static_cast<std::size_t>(k)].first > span[static_cast<std::size_t>(k)].second) return;
    }
    Coords c{0, 0, 0};
    for (c[2] = span[2].first; c[2] <= span[2].second; ++c[2]) {
        for (c[1] = span[1].first; c[1] <= span[1].second; ++c[1]) {
            for (c[0] = span[0].first; c[0] <= span[0].second; ++c[0]) {
                const std::size_t idx = grid.index(c);
                visit(idx, displacement(grid.position(idx), center));
            }
        }
    }
}

}  // namespace

void SingleSiteProfile::validate() const {
    if (!(inner_radius > 0.0 && inner_radius < 0.5)) {
        throw Error(ErrorKind::invalid_delta, "delta_minus must lie in (0, 1/2)");
    }
    if (!(outer_side > 0.0) || !std::isfinite(outer_side)) {
        throw Error(ErrorKind::invalid_delta, "delta_plus must be positive");
    }
    if (!(floor > 0.0 && floor <= 1.0)) throw Error(ErrorKind::invalid_delta, "u_minus must lie in (0, 1]");
    // The ball of radius delta_minus has to fit in the support cube.
    if (inner_radius > 0.5 * outer_side) {
        throw Error(ErrorKind::invalid_delta, "delta_minus exceeds delta_plus / 2");
    }
    if (shape == ProfileShape::tent && floor > 1.0 - 2.0 * inner_radius / outer_side) {
        throw Error(ErrorKind::invalid_delta, "tent profile falls below u_minus inside B(delta_minus)");
    }
}

double SingleSiteProfile::operator()(const Point& r, int dim) const noexcept {
    switch (shape) {
    case ProfileShape::indicator_ball:
        return euclidean(r, dim) < inner_radius ? floor : 0.0;
    case ProfileShape::indicator_cube:
        return sup_norm(r, dim) < 0.5 * outer_side ? 1.0 : 0.0;
    case ProfileShape::tent:
        return std::max(0.0, 1.0 - 2.0 * sup_norm(r, dim) / outer_side);
    }
    return 0.0;
}

CenterPlacement place_centers(const GridSpec& grid, double delta_minus, std::uint64_t structure_seed,
                              PlacementMode mode, double support_side) {
    if (!(delta_minus > 0.0 && delta_minus < 0.5)) {
        throw Error(ErrorKind::invalid_delta, "delta_minus must lie in (0, 1/2)");
    }
    if (!(support_side > 0.0)) throw Error(ErrorKind::invalid_delta, "support side must be positive");
    CenterPlacement out;
    out.dim = grid.dim();
    out.mode = mode;
    out.structure_seed = structure_seed;
    out.inner_radius = delta_minus;

    const double half_offset = 0.5 * (1.0 - 2.0 * delta_minus);
    const double half_box = 0.5 * grid.side_length();
    const double reach = half_box + 0.5 * support_side + half_offset;
    const int jmax = static_cast<int>(std::ceil(reach));
    const int d = grid.dim();

    Coords j{0, 0, 0};
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};
    for (int k = 0; k < d; ++k) {
        lo[static_cast<std::size_t>(k)] = -jmax;
        hi[static_cast<std::size_t>(k)] = jmax;
    }
    for (j[2] = lo[2]; j[2] <= hi[2]; ++j[2]) {
        for (j[1] = lo[1]; j[1] <= hi[1]; ++j[1]) {
            for (j[0] = lo[0]; j[0] <= hi[0]; ++j[0]) {
                Point z{0.0, 0.0, 0.0};
                bool meets = true;
                for (int k = 0; k < d; ++k) {
                    const auto ks = static_cast<std::size_t>(k);
                    double offset = 0.0;
                    if (mode == PlacementMode::crooked) {
                        SplitMix64 rng(stable_hash({structure_seed, encode_coordinate(j[0]),
                                                    encode_coordinate(j[1]), encode_coordinate(j[2]),
                                                    static_cast<std::uint64_t>(k)}));
                        offset = half_offset * (2.0 * rng.uniform() - 1.0);
                    }
                    z[ks] = j[ks] + offset;
                    if (std::abs(z[ks]) - 0.5 * support_side >= half_box) meets = false;
                }
                if (meets) {
                    out.sites.push_back(j);
                    out.centers.push_back(z);
                }
            }
        }
    }
    return out;
}

void CouplingDistribution::validate() const {
    if (!(support_max > 0.0) || !std::isfinite(support_max)) {
        throw Error(ErrorKind::invalid_argument, "coupling support bound M must be positive");
    }
}

double CouplingDistribution::draw(SplitMix64& rng) const noexcept {
    if (kind == DistributionKind::uniform) return support_max * rng.uniform();
    const double a = rng.uniform();
    const double b = rng.uniform();
    return support_max * 0.5 * (a + b);
}

const CouplingDistribution& CouplingLaw::at(const Coords& site) const {
    const auto it = per_site.find(site);
    return it == per_site.end() ? base : it->second;
}

double CouplingLaw::support_max() const noexcept {
    double m = base.support_max;
    for (const auto& [site, law] : per_site) m = std::max(m, law.support_max);
    return m;
}

double concentration(const CouplingDistribution& distribution, double t) {
    if (t < 0.0 || std::isnan(t)) throw Error(ErrorKind::negative_t, "concentration needs t >= 0");
    const double s = t / distribution.support_max;
    if (s >= 1.0) return 1.0;
    if (distribution.kind == DistributionKind::uniform) return s;
    // Triangular density peaked at M/2: the best window is centered there and
    // misses two tails of mass (1 - s)^2 / 2 each.
    return 1.0 - (1.0 - s) * (1.0 - s);
}

double concentration(const CouplingLaw& law, double t) {
    double s = concentration(law.base, t);
    for (const auto& [site, d] : law.per_site) s = std::max(s, concentration(d, t));
    return s;
}

OmegaSample sample_omega(const CouplingLaw& law, const CenterPlacement& centers, std::uint64_t master_seed,
                         std::uint64_t sample_index) {
    OmegaSample out;
    out.master_seed = master_seed;
    out.sample_index = sample_index;
    out.values.reserve(centers.sites.size());
    for (const Coords& j : centers.sites) {
        SplitMix64 rng(stable_hash({master_seed, sample_index, encode_coordinate(j[0]), encode_coordinate(j[1]),
                                    encode_coordinate(j[2])}));
        out.values.push_back(law.at(j).draw(rng));
    }
    return out;
}

OmegaSample constant_omega(const CenterPlacement& centers, double value) {
    OmegaSample out;
    out.values.assign(centers.sites.size(), value);
    return out;
}

std::vector<SiteFootprint> site_footprints(const GridSpec& grid, const CenterPlacement& centers,
                                           const SingleSiteProfile& profile) {
    profile.validate();
    const double radius = profile.shape == ProfileShape::indicator_ball ? profile.inner_radius
                                                                        : 0.5 * profile.outer_side;
    std::vector<SiteFootprint> out(centers.centers.size());
    for (std::size_t s = 0; s < centers.centers.size(); ++s) {
        for_points_near(grid, centers.centers[s], radius, [&](std::size_t idx, const Point& r) {
            const double u = profile(r, grid.dim());
            if (u > 0.0) {
                out[s].points.push_back(idx);
                out[s].values.push_back(u);
            }
        });
    }
    return out;
}

std::vector<double> random_potential(const GridSpec& grid, const std::vector<SiteFootprint>& footprints,
                                     const OmegaSample& omega, double lambda) {
    if (omega.values.size() != footprints.size()) {
        throw Error(ErrorKind::invalid_argument, "omega sample does not match the site list");
    }
    std::vector<double> v(grid.size(), 0.0);
    for (std::size_t s = 0; s < footprints.size(); ++s) {
        const double w = lambda * omega.values[s];
        if (w == 0.0) continue;
        const auto& f = footprints[s];
        for (std::size_t q = 0; q < f.points.size(); ++q) v[f.points[q]] += w * f.values[q];
    }
    return v;
}

std::vector<double> envelope(const GridSpec& grid, const std::vector<SiteFootprint>& footprints) {
    std::vector<double> u(grid.size(), 0.0);
    for (const auto& f : footprints) {
        for (std::size_t q = 0; q < f.points.size(); ++q) u[f.points[q]] += f.values[q];
    }
    return u;
}

std::vector<double> ball_indicator(const GridSpec& grid, const CenterPlacement& centers) {
    std::vector<double> w(grid.size(), 0.0);
    for (const Point& z : centers.centers) {
        for_points_near(grid, z, centers.inner_radius, [&](std::size_t idx, const Point& r) {
            if (euclidean(r, grid.dim()) < centers.inner_radius) w[idx] += 1.0;
        });
    }
    return w;
}

PotentialField assemble_random_potential(const GridSpec& grid, const CenterPlacement& centers,
                                         const SingleSiteProfile& profile, const OmegaSample& omega,
                                         double lambda) {
    const auto footprints = site_footprints(grid, centers, profile);
    PotentialField out;
    out.v_omega = random_potential(grid, footprints, omega, lambda);
    out.u_envelope = envelope(grid, footprints);
    out.w_indicator = ball_indicator(grid, centers);
    return out;
}

DomainMask support_mask(const GridSpec& grid, const CenterPlacement& centers, double support_side) {
    DomainMask mask(grid.size(), 0);
    const double half = 0.5 * support_side;
    for (const Point& z : centers.centers) {
        for_points_near(grid, z, half, [&](std::size_t idx, const Point& r) {
            if (sup_norm(r, grid.dim()) <= half) mask[idx] = 1;
        });
    }
    return mask;
}

}  // namespace alloylab
