#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "alloylab/grid.hpp"
#include "alloylab/hamiltonian.hpp"
#include "alloylab/seeding.hpp"

namespace alloylab {

enum class ProfileShape { indicator_ball, indicator_cube, tent };

/// Single-site bump u with u_minus chi_B(inner_radius) <= u <= chi_cube(outer_side).
///
/// indicator_ball: u_minus on the open ball of radius inner_radius.
/// indicator_cube: 1 on the open cube of side outer_side.
/// tent:           max(0, 1 - 2 |x|_inf / outer_side).
struct SingleSiteProfile {
    ProfileShape shape = ProfileShape::indicator_cube;
    double inner_radius = 0.25;
    double outer_side = 0.5;
    double floor = 1.0;

    /// Throws invalid_delta when the sandwich bounds cannot hold.
    void validate() const;
    /// Value at displacement `r` from the center (first `dim` components).
    double operator()(const Point& r, int dim) const noexcept;
};

enum class PlacementMode { periodic, crooked };

/// Centers z_j = j + offset_j of every site whose support cube meets the box.
struct CenterPlacement {
    int dim = 1;
    PlacementMode mode = PlacementMode::periodic;
    std::uint64_t structure_seed = 0;
    double inner_radius = 0.25;
    std::vector<Coords> sites;
    std::vector<Point> centers;
};

/// Offsets are 0 (periodic) or uniform in the cube of half-side
/// (1 - 2 delta_minus) / 2 (crooked), so B(delta_minus, z_j) stays inside the
/// unit cell of j. Sites are kept when the open cube of side `support_side`
/// around z_j meets the box.
CenterPlacement place_centers(const GridSpec& grid, double delta_minus, std::uint64_t structure_seed,
                              PlacementMode mode, double support_side = 1.0);

enum class DistributionKind { uniform, tent };

/// Coupling law on [0, M]: uniform, or the triangular law of M (u1 + u2) / 2.
struct CouplingDistribution {
    DistributionKind kind = DistributionKind::uniform;
    double support_max = 1.0;

    void validate() const;
    double draw(SplitMix64& rng) const noexcept;
    double mean() const noexcept { return 0.5 * support_max; }
};

/// Base law with optional per-site replacements.
struct CouplingLaw {
    CouplingDistribution base;
    std::map<Coords, CouplingDistribution> per_site;

    const CouplingDistribution& at(const Coords& site) const;
    /// Largest support bound over all laws in use.
    double support_max() const noexcept;
};

/// S(t) = sup_a mu([a, a + t]).
double concentration(const CouplingDistribution& distribution, double t);

/// max over the laws of `law`, the S_L of a box.
double concentration(const CouplingLaw& law, double t);

struct OmegaSample {
    std::vector<double> values;  // aligned with CenterPlacement::sites
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;
};

/// Each site draws from its own splitmix64 stream keyed by
/// (master_seed, sample_index, site), so the result does not depend on
/// traversal order or threads.
OmegaSample sample_omega(const CouplingLaw& law, const CenterPlacement& centers, std::uint64_t master_seed,
                         std::uint64_t sample_index);

/// omega_j = value on every site (e.g. the all-M configuration eta).
OmegaSample constant_omega(const CenterPlacement& centers, double value);

/// Grid points touched by one site together with the profile values there.
struct SiteFootprint {
    std::vector<std::size_t> points;
    std::vector<double> values;
};

std::vector<SiteFootprint> site_footprints(const GridSpec& grid, const CenterPlacement& centers,
                                           const SingleSiteProfile& profile);

struct PotentialField {
    std::vector<double> v_omega;
    std::vector<double> u_envelope;
    std::vector<double> w_indicator;
};

/// v_omega = lambda sum_j omega_j u(x - z_j); U_L = sum_j u(x - z_j);
/// W_L = sum_j chi_B(delta_minus, z_j).
PotentialField assemble_random_potential(const GridSpec& grid, const CenterPlacement& centers,
                                         const SingleSiteProfile& profile, const OmegaSample& omega,
                                         double lambda);

/// lambda sum_j omega_j u_j on the grid from precomputed footprints.
std::vector<double> random_potential(const GridSpec& grid, const std::vector<SiteFootprint>& footprints,
                                     const OmegaSample& omega, double lambda);

std::vector<double> envelope(const GridSpec& grid, const std::vector<SiteFootprint>& footprints);

std::vector<double> ball_indicator(const GridSpec& grid, const CenterPlacement& centers);

/// Grid points in some closed support cube of side `support_side` (1 = inside).
DomainMask support_mask(const GridSpec& grid, const CenterPlacement& centers, double support_side);

}  // namespace alloylab
