#include "mdfit/simplex.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mdfit;

namespace {

double rosenbrock(const Vector& x)
{
    double s = 0.0;
    for (Eigen::Index k = 0; k + 1 < x.size(); ++k) {
        s += 100.0 * std::pow(x(k + 1) - x(k) * x(k), 2) + std::pow(1.0 - x(k), 2);
    }
    return s;
}

} // namespace

TEST(NelderMead, MinimizesQuadratic)
{
    const Objective f = [](const Vector& x) { return (x.array() - 3.0).square().sum(); };
    const auto r = nelder_mead(f, Vector::Zero(3), Vector::Constant(3, 1.0), {});
    EXPECT_LT(r.f, 1e-10);
    EXPECT_NEAR(r.x(1), 3.0, 1e-5);
}

TEST(NelderMead, RespectsBudget)
{
    int calls = 0;
    const Objective f = [&](const Vector& x) {
        ++calls;
        return rosenbrock(x);
    };
    NelderMeadOptions o;
    o.max_evals = 50;
    const auto r = nelder_mead(f, Vector::Zero(4), Vector::Constant(4, 0.5), o);
    EXPECT_LE(r.evals, 50 + 4 + 2);
    EXPECT_EQ(r.evals, calls);
}

TEST(Subplex, SolvesRosenbrockInTenDimensions)
{
    SubplexOptions o;
    o.max_evals = 200000;
    o.initial_step = 0.5;
    const auto r = subplex(rosenbrock, Vector::Zero(10), o);
    EXPECT_LT(r.f, 1e-6);
}

TEST(Subplex, NeverWorseThanStart)
{
    // A start at the exact minimum of a kinked function must be kept.
    const Objective f = [](const Vector& x) { return x.cwiseAbs().sum(); };
    SubplexOptions o;
    o.max_evals = 500;
    const auto r = subplex(f, Vector::Zero(7), o);
    EXPECT_EQ(r.f, 0.0);
    EXPECT_EQ(r.x, Vector::Zero(7));
}

TEST(Subplex, DeterministicForFixedSeed)
{
    SubplexOptions o;
    o.max_evals = 3000;
    o.seed = 42;
    const auto a = subplex(rosenbrock, Vector::Constant(8, -1.0), o);
    const auto b = subplex(rosenbrock, Vector::Constant(8, -1.0), o);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.trace, b.trace);
}

TEST(Subplex, TraceIsNonincreasing)
{
    SubplexOptions o;
    o.max_evals = 5000;
    const auto r = subplex(rosenbrock, Vector::Constant(6, 2.0), o);
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
        EXPECT_LE(r.trace[k].second, r.trace[k - 1].second);
        EXPECT_GE(r.trace[k].first, r.trace[k - 1].first);
    }
}
