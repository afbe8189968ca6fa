#include "mdfit/error_moments.hpp"
#include "mdfit/errors.hpp"
#include "mdfit/selection_test.hpp"

#include "../test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mdfit;

TEST(Selection, RhoSumsToTwo)
{
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto inst = mdfit::testing::random_instance(3 + rep % 6, 1 + rep % 4, rng, 1.7);
        const auto s = selection(inst.cfg, inst.D, 1.0 + 0.1 * rep, 0.1);
        EXPECT_NEAR(s.rho.sum(), 2.0, 1e-12);
        EXPECT_EQ(s.misplaced.size() + s.well_placed.size(), static_cast<std::size_t>(inst.cfg.n()));
        EXPECT_EQ(s.suggested_nonzero, static_cast<int>(s.misplaced.size()) * inst.cfg.p());
    }
}

TEST(Selection, SingleBadPairFlagsBothEnds)
{
    Matrix x(4, 1);
    x << 0.0, 1.0, 2.0, 3.0;
    const Configuration cfg(x);
    Matrix d = pairwise_distances(cfg).values();
    d(0, 3) = d(3, 0) = 5.0;
    const auto s = selection(cfg, DistanceMatrix(d), 1.0, 0.5);
    EXPECT_DOUBLE_EQ(s.rho(0), 1.0);
    EXPECT_DOUBLE_EQ(s.rho(3), 1.0);
    EXPECT_DOUBLE_EQ(s.rho(1), 0.0);
    EXPECT_EQ(s.misplaced, (std::vector<int>{0, 3}));
}

TEST(Selection, AlreadyFitted)
{
    Rng rng(6);
    const Configuration cfg(mdfit::testing::uniform_matrix(5, 2, 0.0, 1.0, rng));
    const auto s = selection(cfg, pairwise_distances(cfg), 1.0, 0.1);
    EXPECT_TRUE(s.already_fitted);
    EXPECT_TRUE(s.misplaced.empty());
    EXPECT_EQ(s.rho.sum(), 0.0);
}

TEST(Selection, RejectsBadThreshold)
{
    Rng rng(7);
    const auto inst = mdfit::testing::random_instance(3, 2, rng);
    EXPECT_THROW((void)selection(inst.cfg, inst.D, 1.0, 1.5), InputError);
}

TEST(Chebyshev, DecisionFromMoments)
{
    const auto rej = chebyshev_from_moments(110.0, 10.0, 100.0, 0.05);
    EXPECT_DOUBLE_EQ(rej.ratio, 0.01);
    EXPECT_EQ(rej.outcome, TestOutcome::Reject);
    EXPECT_TRUE(rej.reject_h0);
    const auto acc = chebyshev_from_moments(12.0, 10.0, 100.0, 0.05);
    EXPECT_DOUBLE_EQ(acc.ratio, 25.0);
    EXPECT_EQ(acc.outcome, TestOutcome::Accept);
    const auto inc = chebyshev_from_moments(10.0, 10.0, 100.0, 0.05);
    EXPECT_EQ(inc.outcome, TestOutcome::Inconclusive);
    EXPECT_TRUE(std::isinf(inc.ratio));
}

TEST(Chebyshev, BoundaryRatioRejects)
{
    EXPECT_EQ(chebyshev_from_moments(30.0, 10.0, 20.0, 0.05).outcome, TestOutcome::Reject);
}

TEST(Chebyshev, UsesScaledDistancesUnderH0)
{
    Rng rng(8);
    const auto inst = mdfit::testing::random_instance(5, 3, rng, 2.0);
    const auto noise = NoiseModel::iid(0.4);
    const auto t = chebyshev_test(inst.cfg, inst.D, noise, 2.0);
    const Matrix h0 = inst.D.values() / 2.0;
    EXPECT_DOUBLE_EQ(t.expected_delta_h0, expected_error_from(inst.D.values(), h0, 3, 0.4, 2.0));
    EXPECT_DOUBLE_EQ(t.delta0, error_at(inst.cfg, inst.D, DisplacementSet::zeros(5, 3), 2.0));
    TestOptions lit;
    lit.h0_literal_d = true;
    const auto tl = chebyshev_test(inst.cfg, inst.D, noise, 2.0, lit);
    EXPECT_DOUBLE_EQ(tl.expected_delta_h0,
                     expected_error_from(inst.D.values(), inst.D.values(), 3, 0.4, 2.0));
}

TEST(Chebyshev, RejectsBadAlphaAndDependentNoise)
{
    EXPECT_THROW((void)chebyshev_from_moments(1.0, 0.0, 1.0, 0.0), InputError);
    Rng rng(9);
    const auto inst = mdfit::testing::random_instance(3, 2, rng);
    EXPECT_THROW((void)chebyshev_test(inst.cfg, inst.D, NoiseModel::dependent(Matrix::Identity(2, 2)), 1.0),
                 InputError);
}
