#include "alloylab/model.hpp"

#include <algorithm>

#include "alloylab/error.hpp"

namespace alloylab {

namespace {

double support_side(const SingleSiteProfile& profile) {
    return profile.shape == ProfileShape::indicator_ball ? 2.0 * profile.inner_radius : profile.outer_side;
}

}  // namespace

AlloyModel::AlloyModel(GridSpec grid, BackgroundField background, DisorderSpec disorder)
    : grid_(grid),
      background_(std::move(background)),
      disorder_(std::move(disorder)),
      centers_(place_centers(grid_, disorder_.profile.inner_radius, disorder_.structure_seed,
                             disorder_.placement, support_side(disorder_.profile))),
      footprints_(site_footprints(grid_, centers_, disorder_.profile)),
      u_envelope_(envelope(grid_, footprints_)),
      w_indicator_(ball_indicator(grid_, centers_)),
      support_(support_mask(grid_, centers_, support_side(disorder_.profile))),
      free_(assemble_hamiltonian(grid_, background_)) {
    disorder_.coupling.base.validate();
    for (const auto& [site, law] : disorder_.coupling.per_site) law.validate();
    // u_- W_L <= U_L pointwise: every ball point carries at least u_- of its own bump.
    for (std::size_t p = 0; p < grid_.size(); ++p) {
        if (disorder_.profile.floor * w_indicator_[p] > u_envelope_[p] * (1.0 + 1e-12)) {
            throw Error(ErrorKind::precondition, "u_minus W_L exceeds U_L at a grid point");
        }
    }
}

OmegaSample AlloyModel::sample(std::uint64_t master_seed, std::uint64_t sample_index) const {
    return sample_omega(disorder_.coupling, centers_, master_seed, sample_index);
}

HermitianOperator AlloyModel::random_operator(const OmegaSample& omega, double lambda) const {
    return free_.plus_diagonal(random_potential(grid_, footprints_, omega, lambda));
}

HermitianOperator AlloyModel::sample_operator(double lambda, std::uint64_t master_seed,
                                              std::uint64_t sample_index) const {
    return random_operator(sample(master_seed, sample_index), lambda);
}

HermitianOperator AlloyModel::eta_operator(double lambda) const {
    OmegaSample eta = constant_omega(centers_, 0.0);
    for (std::size_t s = 0; s < centers_.sites.size(); ++s) {
        eta.values[s] = disorder_.coupling.at(centers_.sites[s]).support_max;
    }
    return random_operator(eta, lambda);
}

HermitianOperator AlloyModel::coupled_operator(double t) const {
    std::vector<double> v(u_envelope_.size());
    std::transform(u_envelope_.begin(), u_envelope_.end(), v.begin(), [t](double u) { return t * u; });
    return free_.plus_diagonal(v);
}

HermitianOperator AlloyModel::complement_operator() const {
    if (std::find(support_.begin(), support_.end(), 0) == support_.end()) {
        throw Error(ErrorKind::empty_domain, "supports cover the whole box");
    }
    return assemble_hamiltonian(grid_, background_, {}, support_);
}

AlloyModel make_model(const GridSpec& grid, const FieldDescription& fields, const DisorderSpec& disorder,
                      bool normalize) {
    BackgroundField bg = sample_background(fields, grid);
    if (normalize) bg = normalize_ground_energy(bg, grid);
    return AlloyModel(grid, std::move(bg), disorder);
}

}  // namespace alloylab
