#include "gfm/errors.hpp"
#include "gfm/multiplier.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gfm;
using gfm::testing::max_abs_diff;
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

std::vector<NormSpec> small_spec_grid() { return {{0, 2, 2}, {0, 1.5, 2}, {1, 4, 1.5}, {-1, 1.5, 4}}; }

}  // namespace

TEST(ApplyMultiplier, IdentityLeavesCoefficientsUnchanged) {
    std::mt19937_64 rng(1);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const auto f = random_coeffs(dual, rng);
        EXPECT_EQ(apply_multiplier(identity_symbol(dual), f).data(), f.data());
    }
}

TEST(ApplyMultiplier, SingleFrequencyProjection) {
    const auto dual = enumerate_dual(make_group(GroupKind::Torus, 1), 16.0);
    Symbol sigma(dual);
    const std::size_t i3 = *dual->find({3, 0, 0});
    sigma.block(i3)(0, 0) = 1.0;
    std::mt19937_64 rng(2);
    const auto f = random_coeffs(dual, rng);
    const auto out = apply_multiplier(sigma, f);
    for (std::size_t i = 0; i < dual->size(); ++i)
        EXPECT_EQ(out.block(i)(0, 0), i == i3 ? f.block(i)(0, 0) : cd{}) << i;
}

TEST(ApplyMultiplier, RespectsL2Bound) {
    std::mt19937_64 rng(3);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const Symbol sigma(random_coeffs(dual, rng));
        const double bound = exact_l2_operator_norm(sigma);
        for (int t = 0; t < 5; ++t) {
            const auto f = random_coeffs(dual, rng);
            EXPECT_LE(plancherel_norm(apply_multiplier(sigma, f)), bound * plancherel_norm(f) * (1 + 1e-12));
        }
    }
}

TEST(ApplyMultiplier, RejectsForeignSlice) {
    const auto a = enumerate_dual(make_group(GroupKind::Torus, 1), 8.0);
    const auto b = enumerate_dual(make_group(GroupKind::Torus, 1), 9.0);
    EXPECT_THROW(apply_multiplier(identity_symbol(a), FourierCoefficients(b)), PreconditionError);
}

TEST(ApplyMultiplier, CompositionMatchesProductSymbol) {
    std::mt19937_64 rng(4);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const Symbol s(random_coeffs(dual, rng)), t(random_coeffs(dual, rng));
        const auto f = random_coeffs(dual, rng);
        const auto lhs = apply_multiplier(s, apply_multiplier(t, f));
        const auto rhs = apply_multiplier(multiply_symbols(s, t), f);
        EXPECT_LT(max_abs_diff(lhs.data(), rhs.data()), 1e-10);
    }
}

TEST(WindowKernel, SupportMeanAndPositivityAtIdentity) {
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const Symbol sigma = identity_symbol(dual);
        const auto k0 = window_kernel(sigma, kPart, 0);
        // mean of the kernel is the trivial-irrep coefficient
        const auto grid = make_grid(c.g, dual->max_label());
        const auto vals = synthesize(k0.coeffs, grid);
        cd mean{};
        for (std::size_t p = 0; p < grid->size(); ++p) mean += grid->weights[p] * vals.values[p];
        EXPECT_NEAR(std::abs(mean - sigma.block(dual->trivial_index())(0, 0)), 0.0, 1e-12);

        for (int ell = 0; ell <= kPart.max_index(c.cutoff); ++ell) {
            const auto k = window_kernel(sigma, kPart, ell);
            EXPECT_GT(inverse_evaluate(k.coeffs, identity_point(c.g)).real(), 0.0) << ell;
            for (std::size_t i = 0; i < dual->size(); ++i) {
                const double b = (*dual)[i].bracket;
                if (kPart.psi(ell, b) == 0.0) {
                    EXPECT_EQ(k.coeffs.block(i).norm(), 0.0);
                }
            }
        }
    }
    EXPECT_THROW(window_kernel(identity_symbol(enumerate_dual(make_group(GroupKind::SU2), 2.0)), kPart, -1),
                 PreconditionError);
}

TEST(WindowKernel, WindowsSumToSymbol) {
    std::mt19937_64 rng(5);
    for (const auto& c : cases()) {
        const auto dual = enumerate_dual(c.g, c.cutoff);
        const Symbol sigma(random_coeffs(dual, rng));
        std::vector<cd> sum(sigma.data().size(), cd{});
        for (int ell = 0; ell <= kPart.max_index(c.cutoff); ++ell) {
            const auto k = window_kernel(sigma, kPart, ell);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += k.coeffs.data()[i];
        }
        EXPECT_LT(max_abs_diff(sum, sigma.data()), 1e-11);
    }
}

TEST(KernelDifferenceIntegral, ZeroOutsideDiameterAndErrors) {
    const auto g = make_group(GroupKind::Torus, 1);
    const auto dual = enumerate_dual(g, 32.0);
    const auto k = window_kernel(build_spectral_symbol(ScalarProfile::power_it(1), dual), kPart, 3);
    const auto grid = make_grid(g, dual->max_label());
    GroupPoint z;
    z.c[0] = 0.25;
    EXPECT_EQ(kernel_difference_integral(k, z, 10.0, grid), 0.0);
    EXPECT_THROW(kernel_difference_integral(k, z, 0.0, grid), PreconditionError);
    EXPECT_THROW(kernel_difference_integral(k, identity_point(g), 1.0, grid), PreconditionError);
}

TEST(KernelDifferenceIntegral, AgreesWithOversampledQuadrature) {
    const auto part = kPart;
    {
        const auto g = make_group(GroupKind::Torus, 1);
        const auto dual = enumerate_dual(g, 64.0);
        const auto k = window_kernel(build_spectral_symbol(ScalarProfile::power_it(1), dual), part, 3);
        GroupPoint z;
        z.c[0] = 0.05;
        const double base = kernel_difference_integral(k, z, 1.0, make_grid(g, dual->max_label()));
        const double fine = kernel_difference_integral(k, z, 1.0, make_grid(g, dual->max_label(), 10.0));
        EXPECT_GT(base, 0.0);
        EXPECT_NEAR(base / fine, 1.0, 0.01);
    }
    {
        const auto g = make_group(GroupKind::SU2);
        const auto dual = su2_dual_up_to_spin(6);
        const auto k = window_kernel(build_spectral_symbol(ScalarProfile::power_it(1), dual), part, 2);
        GroupPoint z;
        z.c = {0.0, 0.2 * std::numbers::pi, 0.0};
        const double base = kernel_difference_integral(k, z, 1.0, make_grid(g, dual->max_label()));
        const double fine = kernel_difference_integral(k, z, 1.0, make_grid(g, dual->max_label(), 4.0));
        EXPECT_GT(base, 0.0);
        EXPECT_NEAR(base / fine, 1.0, 0.01);
    }
}

TEST(KernelDifferenceIntegral, SymmetricUnderInverseForSpectralSymbols) {
    {
        const auto g = make_group(GroupKind::Torus, 1);
        const auto dual = enumerate_dual(g, 64.0);
        const auto k = window_kernel(build_spectral_symbol(ScalarProfile::power_it(1), dual), kPart, 3);
        const auto grid = make_grid(g, dual->max_label());
        GroupPoint z;
        z.c[0] = 0.05;
        EXPECT_NEAR(kernel_difference_integral(k, z, 1.0, grid),
                    kernel_difference_integral(k, inverse(g, z), 1.0, grid), 1e-9);
    }
    {
        const auto g = make_group(GroupKind::SU2);
        const auto dual = su2_dual_up_to_spin(6);
        const auto k = window_kernel(build_spectral_symbol(ScalarProfile::power_it(1), dual), kPart, 2);
        const auto grid = make_grid(g, dual->max_label(), 2.0);
        GroupPoint z;
        z.c = {0.3, 0.2 * std::numbers::pi, 1.1};
        const double a = kernel_difference_integral(k, z, 1.0, grid);
        const double b = kernel_difference_integral(k, inverse(g, z), 1.0, grid);
        EXPECT_NEAR(a / b, 1.0, 0.01);
    }
}

TEST(ExactL2OperatorNorm, Examples) {
    const auto dual = enumerate_dual(make_group(GroupKind::SU2), 4.0);
    EXPECT_NEAR(exact_l2_operator_norm(identity_symbol(dual)), 1.0, 1e-14);
    Symbol sigma(dual);
    const std::size_t i = *dual->find_spin(1);
    sigma.block(i)(0, 0) = 2.0;
    sigma.block(i)(1, 1) = 0.5;
    EXPECT_NEAR(exact_l2_operator_norm(sigma), 2.0, 1e-14);
}

TEST(Ensemble, NamesRoundTrip) {
    for (auto t : {EnsembleType::GaussianCoefficients, EnsembleType::DirichletKernels, EnsembleType::TranslatedWindows,
                   EnsembleType::Directed, EnsembleType::FocusedWindows})
        EXPECT_EQ(ensemble_from_name(ensemble_name(t)), t);
    EXPECT_THROW(ensemble_from_name("uniform"), ConfigError);
}

TEST(Ensemble, DeterministicAndSized) {
    const auto dual = enumerate_dual(make_group(GroupKind::SU2), 6.0);
    const Symbol sigma = build_spectral_symbol(ScalarProfile::wave(), dual);
    EnsembleConfig cfg;
    cfg.types = {EnsembleType::GaussianCoefficients, EnsembleType::DirichletKernels, EnsembleType::TranslatedWindows,
                 EnsembleType::Directed, EnsembleType::FocusedWindows};
    cfg.count = 3;
    cfg.seed = 99;
    const auto a = build_ensemble(cfg, sigma, kPart);
    const auto b = build_ensemble(cfg, sigma, kPart);
    ASSERT_EQ(a.size(), 15u);
    for (std::size_t m = 0; m < a.size(); ++m) {
        EXPECT_EQ(a[m].data(), b[m].data());
        EXPECT_GT(plancherel_norm(a[m]), 0.0) << m;
    }
    cfg.seed = 100;
    EXPECT_NE(build_ensemble(cfg, sigma, kPart)[0].data(), a[0].data());
    cfg.count = 0;
    EXPECT_THROW(build_ensemble(cfg, sigma, kPart), ConfigError);
}

TEST(Ensemble, FocusedMembersMapToWindows) {
    const auto dual = enumerate_dual(make_group(GroupKind::Torus, 1), 32.0);
    const Symbol sigma = build_spectral_symbol(ScalarProfile::wave(), dual);
    EnsembleConfig cfg;
    cfg.types = {EnsembleType::FocusedWindows};
    cfg.count = 2;
    for (const auto& f : build_ensemble(cfg, sigma, kPart)) {
        const auto tf = apply_multiplier(sigma, f);
        // |T f^(xi)| is a real nonnegative window times a translation phase
        for (std::size_t i = 0; i < dual->size(); ++i)
            EXPECT_NEAR(std::abs(tf.block(i)(0, 0)), std::abs(f.block(i)(0, 0)), 1e-14);
    }
}

TEST(BoundednessSweep, IdentityRatiosAreOne) {
    EnsembleConfig cfg;
    cfg.types = {EnsembleType::GaussianCoefficients, EnsembleType::TranslatedWindows};
    cfg.count = 2;
    cfg.seed = 7;
    for (const auto& c : cases()) {
        const auto res = boundedness_sweep(c.g, ScalarProfile::constant(1.0), small_spec_grid(),
                                           {c.cutoff / 2, c.cutoff}, cfg);
        ASSERT_EQ(res.size(), small_spec_grid().size());
        for (const auto& s : res)
            for (const auto& row : s.rows) EXPECT_NEAR(row.max_ratio, 1.0, 1e-9) << group_name(c.g);
    }
}

TEST(BoundednessSweep, DirectedReachesL2NormAtF022) {
    EnsembleConfig cfg;
    cfg.types = {EnsembleType::Directed, EnsembleType::GaussianCoefficients};
    cfg.count = 3;
    cfg.seed = 3;
    for (const auto& c : cases()) {
        const auto profile = ScalarProfile::power_it(5);
        const auto res = boundedness_sweep(c.g, profile, {{0, 2, 2}}, {c.cutoff}, cfg);
        const double norm = exact_l2_operator_norm(build_spectral_symbol(profile, enumerate_dual(c.g, c.cutoff)));
        const double ratio = res[0].rows[0].max_ratio;
        EXPECT_GE(ratio, 0.8 * norm);
        EXPECT_LE(ratio, std::sqrt(2.0) * norm + 1e-9);
    }
}

TEST(BoundednessSweep, DeterministicAndValidated) {
    const auto g = make_group(GroupKind::Torus, 1);
    EnsembleConfig cfg;
    cfg.types = {EnsembleType::DirichletKernels};
    cfg.count = 3;
    cfg.seed = 11;
    const auto a = boundedness_sweep(g, ScalarProfile::wave(), small_spec_grid(), {16, 32}, cfg);
    const auto b = boundedness_sweep(g, ScalarProfile::wave(), small_spec_grid(), {16, 32}, cfg);
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t r = 0; r < a[s].rows.size(); ++r) {
            EXPECT_EQ(a[s].rows[r].max_ratio, b[s].rows[r].max_ratio);
            EXPECT_EQ(a[s].rows[r].argmax_member, b[s].rows[r].argmax_member);
        }
    EXPECT_THROW(boundedness_sweep(g, ScalarProfile::wave(), small_spec_grid(), {32, 16}, cfg), ConfigError);
    EXPECT_THROW(boundedness_sweep(g, ScalarProfile::wave(), {}, {16}, cfg), PreconditionError);
    EXPECT_THROW(boundedness_sweep(g, ScalarProfile::wave(), {{0, 0.5, 2}}, {16}, cfg), ConfigError);
}

TEST(SweepHelpers, VariationMonotoneSlope) {
    BoundednessSweep s;
    s.rows = {{1, 2.0, 0}, {2, 2.5, 0}, {4, 3.0, 0}};
    EXPECT_DOUBLE_EQ(sweep_variation(s), 0.5);
    EXPECT_TRUE(sweep_strictly_increasing(s));
    s.rows[2].max_ratio = 2.5;
    EXPECT_FALSE(sweep_strictly_increasing(s));
    EXPECT_DOUBLE_EQ(least_squares_slope({2, 3, 4}, {1, -1, -3}), -2.0);
    EXPECT_THROW(least_squares_slope({1}, {1}), PreconditionError);
}
