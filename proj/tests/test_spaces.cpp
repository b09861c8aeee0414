#include "gfm/errors.hpp"
#include "gfm/spaces.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace gfm;
using gfm::testing::random_coeffs;

namespace {

const LPPartition kPart = build_partition();

struct Case {
    GroupDescriptor g;
    double cutoff;
};

std::vector<Case> cases() {
    return {{make_group(GroupKind::Torus, 1), 64.0},
            {make_group(GroupKind::Torus, 2), 12.0},
            {make_group(GroupKind::SU2), 8.0}};
}

}  // namespace

TEST(Partition, SupportAndValues) {
    EXPECT_EQ(kPart.eta(0.49), 0.0);
    EXPECT_EQ(kPart.eta(2.01), 0.0);
    EXPECT_EQ(kPart.psi(0, 0.5), 1.0);
    EXPECT_EQ(kPart.psi(0, 2.5), 0.0);
    for (double x = 0.0; x < 4.0; x += 1e-3) {
        EXPECT_GE(kPart.eta(x), 0.0);
        EXPECT_LE(kPart.eta(x), 1.0);
        if (x <= 0.5 || x >= 2.0) {
            EXPECT_LE(kPart.eta(x), 1e-15);
        }
    }
}

TEST(Partition, TelescopesToOne) {
    for (double lam : {1.0, 3.7, 100.0}) {
        double s = 0.0;
        for (int ell = 0; ell <= 10; ++ell) s += kPart.psi(ell, lam);
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
    // two-sided dyadic sum of eta
    for (double lg = -3.0; lg <= 6.0; lg += 0.0137) {
        const double lam = std::pow(10.0, lg);
        double s = 0.0;
        for (int j = -15; j <= 25; ++j) s += kPart.eta(std::ldexp(lam, -j));
        EXPECT_NEAR(s, 1.0, 1e-12) << lam;
    }
}

TEST(Partition, EtaSobolevNormsAreFiniteAndIncreasing) {
    const double h0 = kPart.eta_sobolev_norm(0), h1 = kPart.eta_sobolev_norm(1), h2 = kPart.eta_sobolev_norm(2);
    EXPECT_GT(h0, 0.0);
    EXPECT_GT(h1, h0);
    EXPECT_GT(h2, h1);
    EXPECT_TRUE(std::isfinite(h2));
    // the L^2 part by a plain Riemann sum
    double riemann = 0.0;
    const double dx = 1e-5;
    for (double x = 0.5; x < 2.0; x += dx) riemann += kPart.eta(x) * kPart.eta(x) * dx;
    EXPECT_NEAR(h0, std::sqrt(riemann), 1e-6);
}

TEST(LpProject, Reconstruction) {
    std::mt19937_64 rng(1);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const auto f = random_coeffs(dual, rng);
        std::vector<cd> sum(f.data().size(), cd{});
        for (int ell = 0; ell <= kPart.max_index(c.cutoff) + 1; ++ell) {
            const auto piece = lp_project(f, kPart, ell);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += piece.data()[i];
        }
        EXPECT_LT(gfm::testing::max_abs_diff(sum, f.data()), 1e-11);
    }
    EXPECT_THROW(lp_project(random_coeffs(enumerate_dual(make_group(GroupKind::SU2), 2.0), rng), kPart, -1),
                 PreconditionError);
}

TEST(LpProject, TorusDirichletWindowTwo) {
    const auto dual = enumerate_dual(make_group(GroupKind::Torus, 1), 20.0);
    FourierCoefficients dirichlet(dual);
    for (auto& v : dirichlet.data()) v = 1.0;
    const auto p = lp_project(dirichlet, kPart, 2);
    for (std::size_t i = 0; i < dual->size(); ++i) {
        const double b = (*dual)[i].bracket;
        const cd v = p.block(i)(0, 0);
        EXPECT_EQ(v.real() != 0.0, b > 2.0 && b < 8.0) << b;
        EXPECT_EQ(v.real(), kPart.eta(b / 4.0));
    }
}

TEST(LebesgueNorm, Examples) {
    const auto g = make_group(GroupKind::Torus, 1);
    const auto grid = make_grid(g, 2000);
    GridFunction one(grid);
    std::fill(one.values.begin(), one.values.end(), cd(1.0));
    for (double p : {1.0, 1.5, 2.0, 4.0, std::numeric_limits<double>::infinity()}) EXPECT_NEAR(lebesgue_norm(one, p), 1.0, 1e-12);

    GridFunction f(grid);
    for (std::size_t i = 0; i < grid->size(); ++i)
        f.values[i] = std::polar(1.0, 2 * std::numbers::pi * grid->points[i].c[0]) + 1.0;
    EXPECT_NEAR(lebesgue_norm(f, 1.0), 4.0 / std::numbers::pi, 1e-6);

    std::mt19937_64 rng(2);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const auto fh = random_coeffs(dual, rng);
        const auto vals = synthesize(fh, make_grid(c.g, dual->max_label()));
        EXPECT_NEAR(lebesgue_norm(vals, 2.0) / plancherel_norm(fh), 1.0, 1e-10);
    }
}

TEST(NormSpec, Validation) {
    EXPECT_NO_THROW((NormSpec{0.0, 1.0, 2.0}.validate()));
    EXPECT_THROW((NormSpec{0.0, 0.5, 2.0}.validate()), ConfigError);
    EXPECT_THROW((NormSpec{0.0, 2.0, 1.0}.validate()), ConfigError);
    EXPECT_THROW((NormSpec{0.0, INFINITY, 2.0}.validate()), ConfigError);
    EXPECT_THROW((NormSpec{NAN, 2.0, 2.0}.validate()), ConfigError);
}

TEST(TriebelLizorkin, ConstantFunctionIsItsOwnWindow) {
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        FourierCoefficients f(dual);
        f.block(dual->trivial_index())(0, 0) = cd(0.0, 3.0);
        const auto grid = make_grid(c.g, dual->max_label());
        for (double r : {-1.0, 0.0, 1.0})
            for (double p : {1.5, 2.0, 4.0})
                EXPECT_NEAR(triebel_lizorkin_norm(f, {r, p, 2.0}, kPart, grid), 3.0, 1e-10);
        EXPECT_NEAR(weak_tl_norm(f, {0.0, 1.0, 2.0}, kPart, grid), 3.0, 1e-10);
    }
}

TEST(TriebelLizorkin, F022AgainstL2) {
    std::mt19937_64 rng(3);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const auto grid = make_grid(c.g, dual->max_label());
        for (int t = 0; t < 5; ++t) {
            const auto f = random_coeffs(dual, rng);
            const double ratio = triebel_lizorkin_norm(f, {0, 2, 2}, kPart, grid) / plancherel_norm(f);
            EXPECT_GE(ratio, 1.0 / std::sqrt(2.0) - 1e-12);
            EXPECT_LE(ratio, 1.0 + 1e-12);
        }
    }
}

TEST(TriebelLizorkin, MonotoneInQAndR) {
    std::mt19937_64 rng(4);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const auto grid = make_grid(c.g, dual->max_label());
        for (int t = 0; t < 3; ++t) {
            const LPDecomposition dec(random_coeffs(dual, rng), kPart, grid);
            for (double p : {1.5, 2.0, 4.0}) {
                EXPECT_LE(dec.norm({0, p, 4.0}), dec.norm({0, p, 2.0}) * (1 + 1e-13));
                EXPECT_LE(dec.norm({0, p, 2.0}), dec.norm({0, p, 1.5}) * (1 + 1e-13));
                EXPECT_LE(dec.norm({-1, p, 2.0}), dec.norm({0, p, 2.0}) * (1 + 1e-13));
                EXPECT_LE(dec.norm({0, p, 2.0}), dec.norm({0.5, p, 2.0}) * (1 + 1e-13));
            }
        }
    }
}

TEST(WeakNorm, LevelSets) {
    EXPECT_EQ(weak_level_norm({0, 0, 0}, {0.5, 0.25, 0.25}), 0.0);
    EXPECT_EQ(weak_level_norm({2, 2, 2}, {0.5, 0.25, 0.25}), 2.0);
    // levels 4 (mass 0.1), 1 (mass 0.6): max(0.4, 0.6)
    EXPECT_DOUBLE_EQ(weak_level_norm({4, 1, 0}, {0.1, 0.5, 0.4}), 0.6);
}

TEST(WeakNorm, BelowStrongL1Norm) {
    std::mt19937_64 rng(5);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const auto grid = make_grid(c.g, dual->max_label());
        for (int t = 0; t < 3; ++t) {
            const LPDecomposition dec(random_coeffs(dual, rng), kPart, grid);
            for (double r : {-1.0, 0.0, 1.0}) {
                const NormSpec s{r, 1.0, 2.0};
                EXPECT_LE(dec.weak_norm(s), dec.norm(s) * (1 + 1e-13));
            }
        }
    }
    const auto dual = enumerate_dual(make_group(GroupKind::Torus, 1), 4.0);
    EXPECT_THROW(weak_tl_norm(FourierCoefficients(dual), {0, 2, 2}, kPart, make_grid(dual->group(), 4)),
                 PreconditionError);
}
