#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alloylab/grid.hpp"
#include "alloylab/model.hpp"
#include "alloylab/wegner.hpp"

namespace alloylab {

struct ComplementDomain {
    DomainMask mask;  // 1 = inside some closed support cube
    std::size_t kept_dimension = 0;
};

/// Grid points outside every closed cube of side delta_plus around the centers.
/// Throws empty_domain when nothing is left.
ComplementDomain complement_domain(const GridSpec& grid, const CenterPlacement& centers, double delta_plus);

struct IDSCurve {
    std::vector<double> energies;
    std::vector<double> values;
    std::vector<double> ci;
    double lambda = 0.0;
    double box_side = 0.0;
    std::size_t n_samples = 0;
};

/// Finite-volume IDS: mean of Tr chi_(-inf, E](H_omega,L) / L^d.
IDSCurve ids_estimate(const AlloyModel& model, std::span<const double> energies, double lambda,
                      const SamplingOptions& options);

struct InterlacingReport {
    std::size_t samples = 0;
    std::size_t k_max = 0;
    std::size_t instances = 0;
    std::size_t violations = 0;
    /// min over samples and k of mu_k(H^inf) - mu_k(H_omega).
    double worst_margin = 0.0;
    std::vector<double> complement_eigenvalues;
    std::vector<double> t_values;
    /// coupled_eigenvalues[i][k] = mu_k(H_0,L + t_i U_L)
    std::vector<std::vector<double>> coupled_eigenvalues;
    bool t_monotone = true;
    /// max_k (mu_k(H^inf) - mu_k(H_t)) / mu_k(H^inf) at the largest t.
    double final_relative_gap = 0.0;
};

/// Checks mu_k(H^inf_0,L) >= mu_k(H_omega,L) - 1e-9 for k <= k_max on every
/// sample, and the approach of mu_k(H_0,L(t)) to mu_k(H^inf_0,L) along t_values.
InterlacingReport interlacing_check(const AlloyModel& model, double lambda, std::size_t k_max,
                                    const SamplingOptions& options,
                                    std::vector<double> t_values = {10.0, 1e3, 1e6});

enum class Verdict { vanishing, persistent, inconclusive, skipped };

std::string_view to_string(Verdict v) noexcept;

struct ProbeResult {
    double energy = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> values;  // per lambda
    std::vector<double> ci;
    /// count(H^inf_0,L, (-inf, E]) / L^d
    double complement_density = 0.0;
    /// Samples with count(H_omega) < count(H^inf) at this energy.
    std::size_t per_sample_violations = 0;
    std::string note;
};

struct DichotomyReport {
    double e0_infinity_estimate = 0.0;
    double box_side = 0.0;
    std::vector<double> lambdas;
    std::vector<ProbeResult> probes;
};

/// Large-disorder behaviour of the IDS at each probe energy. Probes within
/// 10% of the threshold are inconclusive; the covering regime is skipped.
DichotomyReport ids_dichotomy(const AlloyModel& model, std::span<const double> probes,
                              const std::vector<double>& lambda_grid, const SamplingOptions& options,
                              double e0_infinity_estimate);

}  // namespace alloylab
