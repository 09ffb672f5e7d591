#pragma once

#include <cstdint>
#include <vector>

#include "alloylab/disorder.hpp"
#include "alloylab/hamiltonian.hpp"

namespace alloylab {

struct DisorderSpec {
    SingleSiteProfile profile;
    PlacementMode placement = PlacementMode::periodic;
    CouplingLaw coupling;
    std::uint64_t structure_seed = 0;
};

/// H_omega,L = H_0,L + lambda V_omega on one box, with the envelope U_L, the
/// ball indicator W_L and the support mask precomputed. Immutable after
/// construction and safe to share across threads.
class AlloyModel {
public:
    /// `background` is used as given; see make_model for the normalized variant.
    AlloyModel(GridSpec grid, BackgroundField background, DisorderSpec disorder);

    const GridSpec& grid() const noexcept { return grid_; }
    const BackgroundField& background() const noexcept { return background_; }
    const DisorderSpec& disorder() const noexcept { return disorder_; }
    const CenterPlacement& centers() const noexcept { return centers_; }
    const std::vector<SiteFootprint>& footprints() const noexcept { return footprints_; }
    const std::vector<double>& u_envelope() const noexcept { return u_envelope_; }
    const std::vector<double>& w_indicator() const noexcept { return w_indicator_; }
    /// Grid points inside some closed support cube.
    const DomainMask& support() const noexcept { return support_; }
    /// M, the largest coupling value any site can take.
    double support_max() const noexcept { return disorder_.coupling.support_max(); }

    OmegaSample sample(std::uint64_t master_seed, std::uint64_t sample_index) const;

    /// H_0,L
    const HermitianOperator& free_operator() const noexcept { return free_; }
    HermitianOperator random_operator(const OmegaSample& omega, double lambda) const;
    HermitianOperator sample_operator(double lambda, std::uint64_t master_seed, std::uint64_t sample_index) const;
    /// The all-M configuration: H_eta,L >= H_omega,L for every omega.
    HermitianOperator eta_operator(double lambda) const;
    /// H_0,L(t) = H_0,L + t U_L
    HermitianOperator coupled_operator(double t) const;
    /// H^inf_0,L: Dirichlet restriction of H_0 to the box minus the supports.
    /// Throws empty_domain in the covering regime.
    HermitianOperator complement_operator() const;

private:
    GridSpec grid_;
    BackgroundField background_;
    DisorderSpec disorder_;
    CenterPlacement centers_;
    std::vector<SiteFootprint> footprints_;
    std::vector<double> u_envelope_;
    std::vector<double> w_indicator_;
    DomainMask support_;
    HermitianOperator free_;
};

/// Samples the fields, shifts them so inf spec H_0,L = 0, and builds the model.
AlloyModel make_model(const GridSpec& grid, const FieldDescription& fields, const DisorderSpec& disorder,
                      bool normalize = true);

}  // namespace alloylab
