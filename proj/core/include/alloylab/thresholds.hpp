#pragma once

#include <span>
#include <vector>

#include "alloylab/hamiltonian.hpp"
#include "alloylab/model.hpp"

namespace alloylab {

/// Dimensional constants of the unique continuation estimates. No numeric
/// values are known, so they are inputs (default 1).
struct UCPConstants {
    double N1 = 1.0;
    double N2 = 1.0;

    void validate() const;
};

/// gamma1 = sqrt(1/2 delta^(N2 (1 + |E0|^(2/3) + ||b0||^2 + ||c0||^(2/3)))).
double gamma1(double delta_minus, double E0, const FieldNorms& norms, const UCPConstants& constants);

/// gamma2 = 1/2 delta^(N2 (1 + |E0|^(2/3) + ||b0||^2 + (||c0|| + lambda M (2 + delta_plus)^d)^(2/3))),
/// not squared, matching the displayed formula.
double gamma2(double delta_minus, double E0, const FieldNorms& norms, double lambda, double M, double delta_plus,
              int dim, const UCPConstants& constants);

/// C_sfuc = delta^(N1 (1 + ||V||^(2/3) + ||b||^2 + ||c||^(2/3))).
double csfuc(double delta, double normV, double norm_b, double norm_c, const UCPConstants& constants);

/// t u_- delta^(N1 (1 + (||V0|| + t u_-)^(2/3) + ||b0||^2 + ||c0||^(2/3))), a lower bound for E0(t).
double e0_lower_bound(double t, double u_minus, double delta_minus, double normV0, double norm_b, double norm_c,
                      const UCPConstants& constants);

struct E0BoundSupremum {
    double t = 0.0;
    double value = 0.0;
};

/// sup over `t_grid` of e0_lower_bound(t, ...), a lower bound for E0(infinity).
E0BoundSupremum e0_infinity_lower_bound(std::span<const double> t_grid, double u_minus, double delta_minus,
                                        double normV0, double norm_b, double norm_c, const UCPConstants& constants);

/// gamma with gamma^2 = delta^(N2 (1 + |E0|^(2/3) + ||b||^2 + ||c||^(2/3))),
/// the mass constant of the projection form of the UCP.
double ucp_gamma(double delta, double E0, const FieldNorms& norms, const UCPConstants& constants);

/// n log-spaced points in [lo, hi]; the default grid is 30 points in [1e-2, 1e6].
std::vector<double> log_grid(double lo, double hi, std::size_t n);
std::vector<double> default_t_grid();

struct ThresholdCurve {
    std::vector<double> t_values;
    std::vector<double> e0_values;
    double e0_infinity_estimate = 0.0;
    /// Ground energy of H^inf_0,L; +infinity when the supports cover the box.
    double e0_infinity_cross_check = 0.0;
    /// |estimate - cross_check| / cross_check
    double relative_discrepancy = 0.0;
    /// True when the two E0(infinity) estimates differ by more than 5%.
    bool discrepancy_flagged = false;
    double box_side = 0.0;
    int points_per_side = 0;
};

/// E_0,L(t) = inf spec(H_0,L + t U_L) over `t_grid` (increasing, positive).
ThresholdCurve e0_curve(const AlloyModel& model, std::span<const double> t_grid, unsigned threads = 1);

/// max over grid points s with E0(s) >= E1 of (E0(s) - E1) / s.
double kappa0(const ThresholdCurve& curve, double E1);

}  // namespace alloylab
