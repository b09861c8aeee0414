#include "gfm/dual.hpp"
#include "gfm/errors.hpp"
#include "gfm/fourier.hpp"
#include "gfm/group.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace gfm;
using gfm::testing::random_point;

namespace {

constexpr double kPi = std::numbers::pi;

double su2_gap(const GroupPoint& x, const GroupPoint& y) {
    return (su2_matrix(x) - su2_matrix(y)).norm();
}

}  // namespace

TEST(MakeGroup, DescriptorsAndErrors) {
    EXPECT_EQ(make_group(GroupKind::Torus, 1).dim, 1);
    EXPECT_EQ(make_group(GroupKind::SU2, 7).dim, 3);
    EXPECT_EQ(make_group("torus", 3).dim, 3);
    EXPECT_THROW(make_group(GroupKind::Torus, 5), ConfigError);
    EXPECT_THROW(make_group(GroupKind::Torus, 0), ConfigError);
    EXPECT_THROW(make_group("so3", 1), ConfigError);
    EXPECT_EQ(group_name(make_group(GroupKind::Torus, 2)), "torus2");
    EXPECT_EQ(group_name(make_group(GroupKind::SU2)), "su2");
}

TEST(BuildGrid, TorusNyquistCount) {
    const auto grid = build_grid(make_group(GroupKind::Torus, 1), 4);
    ASSERT_EQ(grid.size(), 9u);
    for (double w : grid.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 9.0);
}

TEST(BuildGrid, WeightsSumToOne) {
    for (const auto& [g, bl] : std::vector<std::pair<GroupDescriptor, double>>{
             {make_group(GroupKind::Torus, 1), 0},
             {make_group(GroupKind::Torus, 2), 5},
             {make_group(GroupKind::Torus, 3), 3},
             {make_group(GroupKind::SU2), 0},
             {make_group(GroupKind::SU2), 2.5},
             {make_group(GroupKind::SU2), 9}}) {
        const auto grid = build_grid(g, bl);
        const double total = std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0);
        EXPECT_NEAR(total, 1.0, 1e-12) << group_name(g) << " bandlimit " << bl;
        for (double w : grid.weights) EXPECT_GT(w, 0.0);
    }
}

TEST(BuildGrid, Su2SpinOneCentralEntryIntegratesToOneThird) {
    const auto g = make_group(GroupKind::SU2);
    const auto grid = build_grid(g, 2);
    IrrepIndex spin1;
    spin1.twice_spin = 2;
    spin1.dim = 3;
    double acc = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p)
        acc += grid.weights[p] * std::norm(evaluate_irrep(g, spin1, grid.points[p])(1, 1));
    EXPECT_NEAR(acc, 1.0 / 3.0, 1e-10);
}

// Exhaustive Schur orthogonality at a small bandlimit.
TEST(BuildGrid, SchurOrthogonalityOnGrid) {
    for (const auto& [g, cutoff] : std::vector<std::pair<GroupDescriptor, double>>{
             {make_group(GroupKind::SU2), su2_bracket(4)}, {make_group(GroupKind::Torus, 2), 3.2}}) {
        const auto dual = enumerate_dual(g, cutoff);
        const auto grid = build_grid(g, dual->max_label());
        std::vector<std::vector<Eigen::MatrixXcd>> tables(dual->size());
        for (std::size_t i = 0; i < dual->size(); ++i)
            for (const auto& p : grid.points) tables[i].push_back(evaluate_irrep(g, (*dual)[i], p));
        double worst = 0.0;
        for (std::size_t a = 0; a < dual->size(); ++a)
            for (std::size_t b = 0; b < dual->size(); ++b) {
                const int da = (*dual)[a].dim, db = (*dual)[b].dim;
                for (int i = 0; i < da; ++i)
                    for (int j = 0; j < da; ++j)
                        for (int k = 0; k < db; ++k)
                            for (int l = 0; l < db; ++l) {
                                cd acc{};
                                for (std::size_t p = 0; p < grid.size(); ++p)
                                    acc += grid.weights[p] * tables[a][p](i, j) * std::conj(tables[b][p](k, l));
                                const double expect = (a == b && i == k && j == l) ? 1.0 / da : 0.0;
                                worst = std::max(worst, std::abs(acc - expect));
                            }
            }
        EXPECT_LT(worst, 1e-10) << group_name(g);
    }
}

TEST(PointOp, TorusAdditionModOne) {
    const auto g = make_group(GroupKind::Torus, 1);
    GroupPoint x, y;
    x.c[0] = 0.3;
    y.c[0] = 0.9;
    EXPECT_NEAR(point_op(g, PointOp::Multiply, x, y).c[0], 0.2, 1e-15);
    EXPECT_NEAR(inverse(g, x).c[0], 0.7, 1e-15);
}

TEST(PointOp, GroupAxiomsAndCanonicalRanges) {
    std::mt19937_64 rng(11);
    for (const auto& g : {make_group(GroupKind::Torus, 3), make_group(GroupKind::SU2)}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto x = random_point(g, rng);
            const auto y = random_point(g, rng);
            const auto e = multiply(g, x, inverse(g, x));
            EXPECT_LT(geometric_weights(g, e).distance, 1e-7);
            EXPECT_LT(geometric_weights(g, e).q1, 1e-12);
            for (const auto& p : {multiply(g, x, y), inverse(g, x), e}) {
                if (g.is_su2()) {
                    EXPECT_GE(p.alpha(), 0.0);
                    EXPECT_LT(p.alpha(), 2 * kPi);
                    EXPECT_GE(p.beta(), 0.0);
                    EXPECT_LE(p.beta(), kPi);
                    EXPECT_GE(p.gamma(), 0.0);
                    EXPECT_LT(p.gamma(), 4 * kPi);
                } else {
                    for (int j = 0; j < g.dim; ++j) {
                        EXPECT_GE(p.c[j], 0.0);
                        EXPECT_LT(p.c[j], 1.0);
                    }
                }
            }
        }
    }
}

TEST(PointOp, Su2ProductIsHomomorphicInFundamentalRep) {
    const auto g = make_group(GroupKind::SU2);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const auto x = random_point(g, rng);
        const auto y = random_point(g, rng);
        const Eigen::Matrix2cd lhs = su2_matrix(multiply(g, x, y));
        EXPECT_LT((lhs - su2_matrix(x) * su2_matrix(y)).norm(), 1e-12);
    }
}

TEST(PointOp, Su2GimbalConvention) {
    const auto g = make_group(GroupKind::SU2);
    GroupPoint x;
    x.c = {1.0, 0.0, 2.5};
    auto p = canonicalize(g, x);
    EXPECT_EQ(p.beta(), 0.0);
    EXPECT_NEAR(p.alpha(), 3.5, 1e-14);
    EXPECT_EQ(p.gamma(), 0.0);
    EXPECT_LT(su2_gap(p, x), 1e-14);

    // alpha + gamma in [2pi, 4pi): the sheet is carried by gamma = 2pi
    x.c = {3.0, 0.0, 4.0};
    p = canonicalize(g, x);
    EXPECT_NEAR(p.alpha(), 7.0 - 2 * kPi, 1e-14);
    EXPECT_NEAR(p.gamma(), 2 * kPi, 1e-14);
    EXPECT_LT(su2_gap(p, x), 1e-14);

    x.c = {1.0, kPi, 0.5};
    p = canonicalize(g, x);
    EXPECT_EQ(p.beta(), kPi);
    EXPECT_LT(su2_gap(p, x), 1e-14);
    EXPECT_TRUE(p.gamma() == 0.0 || std::abs(p.gamma() - 2 * kPi) < 1e-14);

    // -I
    x.c = {2 * kPi, 0.0, 0.0};
    p = canonicalize(g, x);
    EXPECT_LT((su2_matrix(p) + Eigen::Matrix2cd::Identity()).norm(), 1e-14);
}

TEST(GeometricWeights, Examples) {
    const auto su2 = make_group(GroupKind::SU2);
    const auto t1 = make_group(GroupKind::Torus, 1);
    for (const auto& g : {su2, t1}) {
        const auto w = geometric_weights(g, identity_point(g));
        EXPECT_EQ(w.distance, 0.0);
        EXPECT_EQ(w.rho_sq, 0.0);
        EXPECT_EQ(w.q1, 0.0);
    }
    GroupPoint x;
    x.c = {0.0, kPi, 0.0};  // theta = pi/2
    auto w = geometric_weights(su2, x);
    EXPECT_NEAR(w.distance, kPi / 2, 1e-15);
    EXPECT_NEAR(w.rho_sq, 4.0, 1e-14);
    EXPECT_NEAR(w.q1, std::sqrt(2.0), 1e-14);

    x.c = {0.5, 0.0, 0.0};
    w = geometric_weights(t1, x);
    EXPECT_NEAR(w.distance, kPi, 1e-15);
    EXPECT_NEAR(w.q1, 2.0, 1e-15);
    EXPECT_EQ(w.rho_sq, 0.0);
}

TEST(GeometricWeights, WeightVanishesOnlyAtIdentityAndDistanceIsSymmetric) {
    for (const auto& g : {make_group(GroupKind::Torus, 2), make_group(GroupKind::SU2)}) {
        const auto grid = build_grid(g, 3);
        for (const auto& p : grid.points) {
            const auto w = geometric_weights(g, p);
            const bool is_identity = g.is_su2() ? su2_gap(p, identity_point(g)) < 1e-14
                                                : (p.c[0] == 0.0 && p.c[1] == 0.0);
            EXPECT_EQ(w.q1 == 0.0 || w.q1 < 1e-15, is_identity);
            EXPECT_NEAR(w.distance, geometric_weights(g, inverse(g, p)).distance, 1e-12);
        }
    }
}

TEST(GeometricWeights, Su2RhoMatchesAdjointTrace) {
    const auto g = make_group(GroupKind::SU2);
    IrrepIndex spin1;
    spin1.twice_spin = 2;
    spin1.dim = 3;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_point(g, rng);
        // Ad is the spin-1 representation
        const double tr_ad = evaluate_irrep(g, spin1, x).trace().real();
        EXPECT_NEAR(geometric_weights(g, x).rho_sq, 3.0 - tr_ad, 1e-12);
    }
}

TEST(Haar, TranslationInvariance) {
    std::mt19937_64 rng(21);
    for (const auto& [g, cutoff] : std::vector<std::pair<GroupDescriptor, double>>{
             {make_group(GroupKind::Torus, 1), 20.0}, {make_group(GroupKind::Torus, 2), 6.0},
             {make_group(GroupKind::SU2), su2_bracket(6)}}) {
        const auto dual = enumerate_dual(g, cutoff);
        const auto grid = make_grid(g, dual->max_label());
        for (int trial = 0; trial < 3; ++trial) {
            const auto f = gfm::testing::random_coeffs(dual, rng);
            const auto z = random_point(g, rng);
            std::vector<GroupPoint> moved;
            for (const auto& p : grid->points) moved.push_back(multiply(g, z, p));
            const auto base = synthesize(f, grid);
            const auto shifted = inverse_evaluate(f, moved);
            cd i0{}, i1{};
            for (std::size_t p = 0; p < grid->size(); ++p) {
                i0 += grid->weights[p] * base.values[p];
                i1 += grid->weights[p] * shifted[p];
            }
            EXPECT_LT(std::abs(i0 - i1), 1e-9) << group_name(g);
        }
    }
}
