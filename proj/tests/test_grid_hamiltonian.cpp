#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "alloylab/error.hpp"
#include "alloylab/field_expr.hpp"
#include "alloylab/grid.hpp"
#include "alloylab/hamiltonian.hpp"
#include "alloylab/spectra.hpp"
#include "oracles.hpp"

using namespace alloylab;

namespace {

std::vector<double> spectrum(const HermitianOperator& op) { return eigen_spectrum(op).eigenvalues; }

FieldDescription constant_fields(std::vector<double> a, double v0) {
    FieldDescription d;
    for (double ak : a) d.vector_potential.push_back(ScalarFunction([ak](const Point&) { return ak; }));
    d.scalar_potential = ScalarFunction([v0](const Point&) { return v0; });
    return d;
}

}  // namespace

TEST(Grid, SpacingAndSize) {
    const auto g1 = build_grid(1, 1.0, 3);
    EXPECT_DOUBLE_EQ(g1.spacing(), 0.25);
    EXPECT_EQ(g1.size(), 3u);
    EXPECT_EQ(build_grid(2, 5.0, 4).size(), 16u);
    const auto g3 = build_grid(3, 3.0, 8);
    EXPECT_EQ(g3.size(), 512u);
    EXPECT_NEAR(g3.spacing(), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(g3.spacing() * 9.0, 3.0, 4e-16);
}

TEST(Grid, IndexMapIsBijective) {
    const auto g = build_grid(3, 2.0, 5);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.index(g.coords(i)), i);
    EXPECT_EQ(g.stride(0), 1u);
    EXPECT_EQ(g.stride(1), 5u);
    EXPECT_EQ(g.stride(2), 25u);
}

TEST(Grid, RejectsBadInput) {
    for (int d : {0, 4}) {
        try {
            build_grid(d, 1.0, 3);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::invalid_dimension);
        }
    }
    EXPECT_THROW(build_grid(1, 0.0, 3), Error);
    EXPECT_THROW(build_grid(1, 1.0, 1), Error);
    try {
        build_grid(1, -2.0, 3);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_positive_size);
    }
}

TEST(Background, ZeroFields) {
    const auto g = build_grid(2, 3.0, 4);
    const auto bg = sample_background(FieldDescription{}, g);
    for (const auto& links : bg.link_potential) {
        for (double a : links) EXPECT_EQ(a, 0.0);
    }
    for (double v : bg.scalar_potential) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(bg.energy_shift, 0.0);
}

TEST(Background, ConstantVectorPotentialOnLinks) {
    const auto g = build_grid(2, 3.0, 4);
    const auto bg = sample_background(constant_fields({0.7, 0.0}, 0.0), g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (g.has_forward_neighbor(p, 0)) EXPECT_EQ(bg.link_potential[0][p], 0.7);
        EXPECT_EQ(bg.link_potential[1][p], 0.0);
    }
}

TEST(Background, ClosedFormScalarPotential) {
    const auto g = build_grid(1, 1.0, 3);
    FieldDescription d;
    d.scalar_potential = ScalarFunction([](const Point& x) { return std::sin(2.0 * std::numbers::pi * x[0]); });
    const auto bg = sample_background(d, g);
    EXPECT_NEAR(bg.scalar_potential[0], -1.0, 1e-15);
    EXPECT_NEAR(bg.scalar_potential[1], 0.0, 1e-15);
    EXPECT_NEAR(bg.scalar_potential[2], 1.0, 1e-15);
}

TEST(Background, NonFiniteSampleIsAnError) {
    const auto g = build_grid(1, 2.0, 3);
    FieldDescription d;
    d.scalar_potential = ScalarFunction([](const Point& x) { return 1.0 / x[0]; });
    try {
        sample_background(d, g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_finite_sample);
    }
}

TEST(Background, ExpressionFields) {
    const auto e = FieldExpression::parse("2*sin(pi*x1) + x2^2 - -1");
    EXPECT_NEAR(e({0.5, 3.0, 0.0}), 2.0 + 9.0 + 1.0, 1e-14);
    EXPECT_NEAR(FieldExpression::parse("2^3^2")({}), 512.0, 0);
    EXPECT_THROW(FieldExpression::parse("sin(x"), Error);
    EXPECT_THROW(FieldExpression::parse("foo(1)"), Error);
}

TEST(Assemble, FreeTridiagonal) {
    const auto g = build_grid(1, 1.0, 3);
    const auto op = assemble_hamiltonian(g, zero_background(g));
    const auto m = op.to_dense();
    const double h2 = g.spacing() * g.spacing();
    for (int i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(m(i, i).real(), 2.0 / h2);
        if (i + 1 < 3) EXPECT_DOUBLE_EQ(m(i, i + 1).real(), -1.0 / h2);
    }
    EXPECT_EQ(m(0, 2), Complex(0.0, 0.0));
}

TEST(Assemble, FreeEigenvaluesUnitSpacing) {
    const auto g = build_grid(1, 4.0, 3);  // h = 1
    const auto ev = spectrum(assemble_hamiltonian(g, zero_background(g)));
    const std::vector<double> expected{2.0 - std::sqrt(2.0), 2.0, 2.0 + std::sqrt(2.0)};
    EXPECT_LT(oracle::max_abs_diff(ev, expected), 1e-12);

    auto bg = zero_background(g);
    for (double& v : bg.scalar_potential) v = 5.0;
    const auto shifted = spectrum(assemble_hamiltonian(g, bg));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(shifted[i], expected[i] + 5.0, 1e-12);
}

TEST(Assemble, FreeTensorStructure) {
    for (int d : {1, 2, 3}) {
        const int n = d == 3 ? 5 : 9;
        const auto g = build_grid(d, 2.5, n);
        const auto ev = spectrum(assemble_hamiltonian(g, zero_background(g)));
        EXPECT_LT(oracle::max_abs_diff(ev, oracle::free_tensor(d, n, g.spacing())), 1e-10) << "d=" << d;
    }
}

TEST(Assemble, HermitianByConstruction) {
    const auto g = build_grid(2, 3.0, 6);
    FieldDescription d;
    d.vector_potential = {ScalarFunction([](const Point& x) { return std::sin(x[1]) + 0.3; }),
                          ScalarFunction([](const Point& x) { return x[0] * x[0]; })};
    const auto op = assemble_hamiltonian(g, sample_background(d, g));
    EXPECT_EQ(op.hermiticity_defect(), 0.0);
    for (double v : op.diagonal()) EXPECT_TRUE(std::isfinite(v));
    EXPECT_FALSE(op.is_real());
}

TEST(Assemble, MaskRemovesPointsAndEmptyMaskFails) {
    const auto g = build_grid(1, 4.0, 3);
    DomainMask mask{0, 1, 0};
    const auto op = assemble_hamiltonian(g, zero_background(g), {}, mask);
    EXPECT_EQ(op.dimension(), 2u);
    EXPECT_EQ(op.grid_indices(), (std::vector<std::size_t>{0, 2}));
    const auto ev = spectrum(op);
    EXPECT_NEAR(ev[0], 2.0, 1e-14);  // two decoupled Dirichlet points
    try {
        assemble_hamiltonian(g, zero_background(g), {}, DomainMask{1, 1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::empty_domain);
    }
}

TEST(Gauge, IdentityAndLinear) {
    const auto g = build_grid(1, 2.0, 7);
    const auto bg = sample_background(constant_fields({0.4}, 0.0), g);
    const auto same = gauge_transform(bg, g, std::vector<double>(g.size(), 0.0));
    EXPECT_EQ(same.link_potential, bg.link_potential);

    std::vector<double> chi(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) chi[p] = 1.5 * g.position(p)[0];
    const auto moved = gauge_transform(bg, g, chi);
    for (std::size_t p = 0; p + 1 < g.size(); ++p) EXPECT_NEAR(moved.link_potential[0][p], 0.4 + 1.5, 1e-12);
    EXPECT_EQ(moved.scalar_potential, bg.scalar_potential);
}

TEST(Gauge, RandomGaugeLeavesSpectrumInvariant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto g = build_grid(2, 4.0, 12);
    FieldDescription d;
    d.vector_potential = {ScalarFunction([](const Point& x) { return 0.8 * std::cos(x[1]); }),
                          ScalarFunction([](const Point& x) { return -0.5 * x[0]; })};
    d.scalar_potential = ScalarFunction([](const Point& x) { return x[0] * x[1]; });
    const auto bg = sample_background(d, g);
    std::vector<double> chi(g.size());
    for (double& c : chi) c = u(rng);
    const auto before = spectrum(assemble_hamiltonian(g, bg));
    const auto after = spectrum(assemble_hamiltonian(g, gauge_transform(bg, g, chi)));
    EXPECT_LT(oracle::max_abs_diff(before, after), 1e-10);
}

TEST(FieldNorms, Examples) {
    const auto g2 = build_grid(2, 3.0, 5);
    auto n0 = field_norms(zero_background(g2), g2);
    EXPECT_EQ(n0.norm_b, 0.0);
    EXPECT_EQ(n0.norm_c, 0.0);

    const auto nc = field_norms(sample_background(constant_fields({1.0, 0.0}, 0.0), g2), g2);
    EXPECT_DOUBLE_EQ(nc.norm_b, 2.0);
    EXPECT_DOUBLE_EQ(nc.norm_divA, 0.0);
    EXPECT_DOUBLE_EQ(nc.norm_c, 1.0);

    const auto nv = field_norms(sample_background(constant_fields({}, -3.0), g2), g2);
    EXPECT_DOUBLE_EQ(nv.norm_V0, 3.0);
    EXPECT_DOUBLE_EQ(nv.norm_c, 3.0);
}

TEST(FieldNorms, InvariantOnRandomFields) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int dim = 1 + trial % 3;
        const auto g = build_grid(dim, 3.0, dim == 3 ? 4 : 7);
        auto bg = zero_background(g);
        for (auto& links : bg.link_potential) {
            for (double& a : links) a = u(rng);
        }
        for (double& v : bg.scalar_potential) v = u(rng);
        const auto n = field_norms(bg, g);
        EXPECT_GE(n.norm_c, 0.0);
        EXPECT_LE(n.norm_c, n.norm_V0 + 0.25 * n.norm_b * n.norm_b + n.norm_divA + 1e-12);
    }
}

TEST(Normalize, FreeCaseAndIdempotence) {
    const auto g = build_grid(1, 4.0, 3);
    const auto bg = normalize_ground_energy(zero_background(g), g);
    EXPECT_NEAR(bg.energy_shift, -(2.0 - std::sqrt(2.0)), 1e-12);

    auto v5 = zero_background(g);
    for (double& v : v5.scalar_potential) v = 5.0;
    const auto once = normalize_ground_energy(v5, g);
    EXPECT_NEAR(once.energy_shift, -(2.0 - std::sqrt(2.0) + 5.0), 1e-12);
    const auto twice = normalize_ground_energy(once, g);
    EXPECT_LT(std::abs(twice.energy_shift - once.energy_shift), 1e-10);
    EXPECT_NEAR(ground_energy(assemble_hamiltonian(g, once)), 0.0, 1e-12);
}

TEST(Monotonicity, PotentialAndDomain) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    const auto g = build_grid(2, 3.0, 8);
    const auto bg = sample_background(constant_fields({0.3, -0.2}, 0.0), g);
    std::vector<double> v1(g.size());
    std::vector<double> v2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        v1[i] = u(rng);
        v2[i] = v1[i] + u(rng);
    }
    const auto e1 = spectrum(assemble_hamiltonian(g, bg, v1));
    const auto e2 = spectrum(assemble_hamiltonian(g, bg, v2));
    for (std::size_t k = 0; k < e1.size(); ++k) EXPECT_LE(e1[k], e2[k] + 1e-10);

    DomainMask mask(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); i += 3) mask[i] = 1;
    const auto full = spectrum(assemble_hamiltonian(g, bg));
    const auto sub = spectrum(assemble_hamiltonian(g, bg, {}, mask));
    for (std::size_t k = 0; k < sub.size(); ++k) EXPECT_GE(sub[k], full[k] - 1e-10);
}

TEST(Tabulated, CsvRoundTrip) {
    const auto g = build_grid(2, 2.0, 2);
    const std::string path = ::testing::TempDir() + "/alloylab_v0.csv";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("i1,i2,value\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n", f);
        std::fclose(f);
    }
    const auto t = load_tabulated_csv(path, g);
    EXPECT_EQ(t.values, (std::vector<double>{1, 2, 3, 4}));
    FieldDescription d;
    d.scalar_potential = t;
    EXPECT_EQ(sample_background(d, g).scalar_potential, t.values);
}
