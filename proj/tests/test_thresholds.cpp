#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "alloylab/error.hpp"
#include "alloylab/model.hpp"
#include "alloylab/thresholds.hpp"

using namespace alloylab;

namespace {

AlloyModel gap_model(int n) {
    DisorderSpec spec;
    spec.profile = {ProfileShape::indicator_cube, 0.2, 0.4, 1.0};
    spec.placement = PlacementMode::crooked;
    spec.structure_seed = 3;
    return make_model(build_grid(1, 7.0, n), {}, spec);
}

AlloyModel covering_model(int dim, int n) {
    DisorderSpec spec;
    spec.profile = {ProfileShape::tent, 0.25, 2.0, 0.5};
    return make_model(build_grid(dim, 5.0, n), {}, spec);
}

}  // namespace

TEST(Constants, Gamma1Examples) {
    EXPECT_NEAR(gamma1(0.25, 1.0, {}, {}), std::sqrt(0.03125), 1e-12);
    EXPECT_NEAR(std::pow(gamma1(0.5, 1e-300, {}, {}), 2), 0.25, 1e-12);
    EXPECT_LT(gamma1(0.25, 1.0, {}, {1.0, 2.0}), gamma1(0.25, 1.0, {}, {1.0, 1.0}));
    EXPECT_THROW(gamma1(0.6, 1.0, {}, {}), Error);
}

TEST(Constants, Gamma2Examples) {
    EXPECT_NEAR(gamma2(0.25, 1.0, {}, 0.0, 1.0, 0.4, 1, {}), 0.03125, 1e-12);
    const double with_coupling = gamma2(0.25, 1.0, {}, 1.0, 1.0, 0.0, 1, {});
    EXPECT_NEAR(with_coupling, 0.5 * std::pow(0.25, 2.0 + std::cbrt(4.0)), 1e-12);
    double prev = 1.0;
    for (double lm : {0.0, 1.0, 10.0, 1e3, 1e6}) {
        const double g = gamma2(0.25, 1.0, {}, lm, 1.0, 0.4, 2, {});
        EXPECT_LT(g, prev);
        prev = g;
    }
    EXPECT_LT(prev, 1e-100);
}

TEST(Constants, CsfucExamples) {
    EXPECT_NEAR(csfuc(0.5, 0.0, 0.0, 0.0, {}), 0.5, 1e-12);
    EXPECT_NEAR(csfuc(0.25, 8.0, 0.0, 0.0, {}), std::pow(0.25, 5.0), 1e-12);
    const double one = csfuc(0.3, 2.0, 0.5, 1.5, {1.0, 1.0});
    EXPECT_NEAR(csfuc(0.3, 2.0, 0.5, 1.5, {2.0, 1.0}), one * one, 1e-12);
}

TEST(Constants, E0LowerBoundExamples) {
    EXPECT_EQ(e0_lower_bound(0.0, 1.0, 0.5, 0.0, 0.0, 0.0, {}), 0.0);
    EXPECT_NEAR(e0_lower_bound(1.0, 1.0, 0.5, 0.0, 0.0, 0.0, {}), 0.25, 1e-12);
    try {
        e0_lower_bound(-1.0, 1.0, 0.5, 0.0, 0.0, 0.0, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
    }
    const auto grid = default_t_grid();
    const auto sup = e0_infinity_lower_bound(grid, 1.0, 0.25, 0.0, 0.0, 0.0, {});
    for (double t : grid) EXPECT_LE(e0_lower_bound(t, 1.0, 0.25, 0.0, 0.0, 0.0, {}), sup.value);
}

TEST(Constants, MonotoneInEveryArgument) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    std::uniform_real_distribution<double> d(0.05, 0.49);
    for (int i = 0; i < 1000; ++i) {
        const double delta = d(rng);
        const FieldNorms n{u(rng), u(rng), u(rng), 0.0};
        const double E0 = u(rng);
        const UCPConstants c{1.0 + u(rng), 1.0 + u(rng)};
        const double g1 = gamma1(delta, E0, n, c);
        EXPECT_GT(g1, 0.0);
        EXPECT_LT(g1, 1.0);
        EXPECT_LT(gamma1(delta, E0 * 1.5, n, c), g1);
        EXPECT_LT(gamma1(delta, E0, {n.norm_b * 1.5, n.norm_c, 0.0, 0.0}, c), g1);
        EXPECT_LT(gamma1(delta, E0, n, {c.N1, c.N2 * 1.5}), g1);
        const double cs = csfuc(delta, n.norm_V0, n.norm_b, n.norm_c, c);
        EXPECT_LT(csfuc(delta, n.norm_V0 * 1.5, n.norm_b, n.norm_c, c), cs);
        EXPECT_LT(csfuc(delta, n.norm_V0, n.norm_b, n.norm_c * 1.5, c), cs);
    }
}

TEST(Grids, LogGrid) {
    const auto g = default_t_grid();
    ASSERT_EQ(g.size(), 30u);
    EXPECT_EQ(g.front(), 1e-2);
    EXPECT_EQ(g.back(), 1e6);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Curve, CoveringIsAScalarShift) {
    const auto model = covering_model(1, 79);
    const std::vector<double> t{0.1, 1.0, 10.0, 100.0};
    const auto curve = e0_curve(model, t);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(curve.e0_values[i], t[i], 1e-9 * (1.0 + t[i]));
    EXPECT_TRUE(std::isinf(curve.e0_infinity_cross_check));
    EXPECT_DOUBLE_EQ(kappa0(curve, 0.5), (100.0 - 0.5) / 100.0);
}

TEST(Curve, GapSaturatesAtComplementGroundEnergy) {
    const auto model = gap_model(255);
    const auto curve = e0_curve(model, default_t_grid());
    for (std::size_t i = 1; i < curve.e0_values.size(); ++i) EXPECT_GE(curve.e0_values[i], curve.e0_values[i - 1]);
    EXPECT_LE(curve.e0_values.back(), curve.e0_infinity_cross_check + 1e-8);
    EXPECT_LT(curve.relative_discrepancy, 0.01);
    EXPECT_FALSE(curve.discrepancy_flagged);
}

TEST(Curve, ThreadCountDoesNotChangeValues) {
    const auto model = gap_model(63);
    const auto grid = log_grid(0.1, 1e4, 9);
    EXPECT_EQ(e0_curve(model, grid, 1).e0_values, e0_curve(model, grid, 4).e0_values);
}

TEST(Kappa0, ToyCurve) {
    ThresholdCurve curve;
    for (int i = 1; i <= 200000; ++i) {
        const double s = 1e-3 * i;
        curve.t_values.push_back(s);
        curve.e0_values.push_back(s / (1.0 + s));
    }
    curve.e0_infinity_estimate = curve.e0_values.back();
    const double k = kappa0(curve, 0.5);
    const double s = 1.0 + std::numbers::sqrt2;
    EXPECT_NEAR(k, (s - 1.0) / (2.0 * s * (1.0 + s)), 1e-8);
    EXPECT_NEAR(k, 0.08579, 1e-5);
}

TEST(Kappa0, Errors) {
    ThresholdCurve curve;
    curve.t_values = {1.0, 2.0};
    curve.e0_values = {0.1, 0.2};
    curve.e0_infinity_estimate = 0.2;
    try {
        kappa0(curve, 0.3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::e1_above_threshold);
    }
    curve.e0_infinity_estimate = 1.0;  // inconsistent curve: no grid point reaches E1
    try {
        kappa0(curve, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::empty_feasible_set);
    }
}

TEST(Kappa0, IncreasesWithTheCurve) {
    const auto model = gap_model(63);
    auto curve = e0_curve(model, default_t_grid());
    const double E1 = 0.5 * curve.e0_infinity_estimate;
    const double k = kappa0(curve, E1);
    EXPECT_GT(k, 0.0);
    for (double& e : curve.e0_values) e += 0.1;
    curve.e0_infinity_estimate += 0.1;
    EXPECT_GT(kappa0(curve, E1), k);
}
