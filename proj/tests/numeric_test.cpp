#include "bernmm/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "bernmm/analytic.hpp"
#include "oracles.hpp"

namespace bernmm {
namespace {

TEST(GridAxis, IncludesBothEndsWhenStepDoesNotDivideEta) {
    const auto axis = grid_axis(ParamSpace(0.25), GridSpec(0.1));
    ASSERT_EQ(axis.size(), 4u);
    EXPECT_EQ(axis.front(), 0.0);
    EXPECT_EQ(axis.back(), 0.25);
    EXPECT_DOUBLE_EQ(axis[2], 0.2);
}

TEST(GridAxis, ExactDivision) {
    const auto axis = grid_axis(ParamSpace(1.0), GridSpec(1e-3));
    EXPECT_EQ(axis.size(), 1001u);
    EXPECT_EQ(axis.back(), 1.0);
    EXPECT_EQ(axis[250], 0.25);
    EXPECT_EQ(axis[750], 0.75);
}

TEST(GridAxis, Errors) {
    EXPECT_THROW(GridSpec(0.0), std::invalid_argument);
    EXPECT_THROW(GridSpec(-1e-3), std::invalid_argument);
    EXPECT_THROW(grid_axis(ParamSpace(0.1), GridSpec(0.2)), std::invalid_argument);
    EXPECT_EQ(grid_axis(ParamSpace(0.0), GridSpec(0.2)).size(), 1u);
}

TEST(GridMinimax, FullSpace) {
    const auto sol = grid_minimax(ParamSpace(1.0), GridSpec(1e-3));
    EXPECT_NEAR(sol.a, 0.25, 2e-3);
    EXPECT_NEAR(sol.b, 0.75, 2e-3);
    EXPECT_NEAR(sol.value, 1.0 / 16.0, 1e-4);
    EXPECT_EQ(sol.evaluations, 1001u * 1001u);
    EXPECT_FALSE(sol.refined);
}

TEST(GridMinimax, CovidSpace) {
    const auto sol = grid_minimax(ParamSpace(0.2), GridSpec(1e-3));
    EXPECT_NEAR(sol.a, 0.0944272, 2e-3);
    EXPECT_NEAR(sol.b, 0.2, 2e-3);
}

TEST(GridMinimax, PointSpace) {
    const auto sol = grid_minimax(ParamSpace(0.0), GridSpec(1e-3));
    EXPECT_EQ(sol.a, 0.0);
    EXPECT_EQ(sol.b, 0.0);
    EXPECT_EQ(sol.value, 0.0);
}

TEST(GridMinimax, AgreesWithClosedFormAcrossEta) {
    for (int i = 1; i <= 20; ++i) {
        const double eta = i / 20.0;
        const ParamSpace space(eta);
        const double step = 1e-3;
        const auto sol = grid_minimax(space, GridSpec(step));
        const auto exact = minimax_n1(space);
        EXPECT_LE(std::abs(sol.a - exact.a_star), 2 * step) << eta;
        EXPECT_LE(std::abs(sol.b - exact.b_star), 2 * step) << eta;
        // Lipschitz bound: |grad sup_risk|_1 <= 2 on [0, 1]^2 and the nearest
        // node is within step / 2 in each coordinate.
        EXPECT_LE(std::abs(sol.value - exact.value), step) << eta;
        EXPECT_GE(sol.value, exact.value - 1e-15) << eta;
    }
}

TEST(GridMinimax, IndependentOfThreadCount) {
    const ParamSpace space(0.63);
    const GridSpec grid(2e-3);
    const auto serial = grid_minimax(space, grid, 1);
    for (const unsigned threads : {2u, 3u, 7u, 64u}) {
        const auto parallel = grid_minimax(space, grid, threads);
        EXPECT_EQ(parallel.a, serial.a);
        EXPECT_EQ(parallel.b, serial.b);
        EXPECT_EQ(parallel.value, serial.value);
    }
}

TEST(GridMinimax, TwoByTwoGrid) {
    // Nodes (0,0) (0,.5) (.5,0) (.5,.5) have sup risks .25 .125 .25 .25.
    const auto sol = grid_minimax(ParamSpace(0.5), GridSpec(0.5));
    EXPECT_EQ(sol.a, 0.0);
    EXPECT_EQ(sol.b, 0.5);
    EXPECT_EQ(sol.value, 0.125);
    EXPECT_EQ(sol.evaluations, 4u);
}

class RefineOracle : public ::testing::TestWithParam<int> {};

TEST_P(RefineOracle, ReachesClosedFormFromCoarseGrid) {
    const double eta = GetParam() / 20.0;
    const ParamSpace space(eta);
    const auto coarse = grid_minimax(space, GridSpec(std::min(1e-2, eta)));
    const auto fine = refine(space, coarse.estimator(), 1e-8);
    const auto exact = minimax_n1(space);
    EXPECT_TRUE(fine.refined);
    EXPECT_LE(std::abs(fine.value - exact.value), 1e-9);
    EXPECT_LE(std::abs(fine.a - exact.a_star), 1e-6);
    EXPECT_LE(std::abs(fine.b - exact.b_star), 1e-6);
    ASSERT_GE(fine.objective_trace.size(), 2u);
    for (std::size_t i = 1; i < fine.objective_trace.size(); ++i) {
        EXPECT_LE(fine.objective_trace[i], fine.objective_trace[i - 1]);
    }
    EXPECT_EQ(fine.objective_trace.back(), fine.value);
    EXPECT_EQ(fine.value, sup_risk(fine.estimator(), space).value);
}

INSTANTIATE_TEST_SUITE_P(EtaGrid, RefineOracle, ::testing::Range(1, 21));

TEST(Refine, CovidSpaceFromCoarseGrid) {
    const ParamSpace space(0.2);
    const auto fine = refine(space, grid_minimax(space, GridSpec(1e-2)).estimator(), 1e-8);
    EXPECT_LE(std::abs(fine.value - minimax_value(space)), 1e-10);
}

TEST(Refine, StationaryAtClosedForm) {
    for (const double eta : {0.1, 0.2, 0.5, 0.75, 0.9, 1.0}) {
        const ParamSpace space(eta);
        const auto exact = minimax_n1(space);
        for (const double tol : {1e-3, 1e-8}) {
            const auto sol = refine(space, exact.estimator(), tol);
            EXPECT_TRUE(sol.refined);
            EXPECT_EQ(sol.a, exact.a_star) << eta;
            EXPECT_EQ(sol.b, exact.b_star) << eta;
            EXPECT_EQ(sol.value, sup_risk(exact.estimator(), space).value) << eta;
        }
    }
}

TEST(Refine, JunctionPoint) {
    const ParamSpace space(0.75);
    const auto sol = refine(space, {0.25, 0.75}, 1e-8);
    EXPECT_LE(std::abs(sol.value - 1.0 / 16.0), 1e-10);
}

TEST(Refine, ReachesOptimumFromFarStart) {
    // The kink at (1/4, 3/4) is not axis-aligned; nested line searches still find it.
    const ParamSpace space(1.0);
    const auto sol = refine(space, {0.9, 0.1}, 1e-8);
    EXPECT_NEAR(sol.a, 0.25, 1e-6);
    EXPECT_NEAR(sol.b, 0.75, 1e-6);
    EXPECT_NEAR(sol.value, 1.0 / 16.0, 1e-9);
}

TEST(Refine, ReportsNonConvergence) {
    RefineOptions options;
    options.max_sweeps = 1;
    options.initial_half_width = 1e-4;
    EXPECT_THROW(refine(ParamSpace(1.0), {0.9, 0.1}, 1e-8, options), ConvergenceError);
}

TEST(Refine, ArgumentErrors) {
    const ParamSpace space(0.5);
    EXPECT_THROW(refine(space, {0.2, 0.2}, 0.0), std::invalid_argument);
    EXPECT_THROW(refine(space, {0.6, 0.2}, 1e-8), std::invalid_argument);
    EXPECT_THROW(refine(space, {0.2, -0.1}, 1e-8), std::invalid_argument);
}

TEST(Refine, PointSpace) {
    const auto sol = refine(ParamSpace(0.0), {0.0, 0.0}, 1e-8);
    EXPECT_EQ(sol.value, 0.0);
    EXPECT_TRUE(sol.refined);
}

TEST(Refine, BitReproducible) {
    const ParamSpace space(0.37);
    const auto first = refine(space, {0.1, 0.3}, 1e-8);
    const auto second = refine(space, {0.1, 0.3}, 1e-8);
    EXPECT_EQ(first.a, second.a);
    EXPECT_EQ(first.b, second.b);
    EXPECT_EQ(first.value, second.value);
    EXPECT_EQ(first.evaluations, second.evaluations);
}

TEST(GeneralEstimator, Construction) {
    EXPECT_THROW(GeneralEstimator({}), std::invalid_argument);
    EXPECT_THROW(GeneralEstimator({0.0, std::nan("")}), std::invalid_argument);
    EXPECT_EQ(GeneralEstimator({0.1, 0.2, 0.3}).n(), 2u);
    const auto classic = GeneralEstimator::classic(1);
    EXPECT_EQ(classic.estimates()[0], 0.25);
    EXPECT_EQ(classic.estimates()[1], 0.75);
}

TEST(GeneralRisk, ReducesToBinaryRisk) {
    oracle::Sampler rng(31);
    for (int s = 0; s < 1000; ++s) {
        const BinaryEstimator est{rng.uniform(), rng.uniform()};
        const double theta = rng.uniform();
        EXPECT_NEAR(general_risk_at(GeneralEstimator::from_binary(est), theta), risk_at(est, theta), 1e-15);
    }
}

TEST(GeneralSupRisk, ReducesToExactSupAtNOne) {
    oracle::Sampler rng(32);
    for (int s = 0; s < 100; ++s) {
        const double eta = rng.uniform();
        const BinaryEstimator est{rng.uniform(0.0, eta), rng.uniform(0.0, eta)};
        const ParamSpace space(eta);
        const auto general = general_sup_risk(GeneralEstimator::from_binary(est), space);
        EXPECT_NEAR(general.value, sup_risk(est, space).value, 1e-9) << est.a << " " << est.b << " " << eta;
    }
}

TEST(GeneralSupRisk, ConstantEstimator) {
    for (const double c : {0.0, 0.3, 0.5, 0.8}) {
        const auto sup = general_sup_risk(GeneralEstimator({c, c, c}), ParamSpace(1.0));
        EXPECT_NEAR(sup.value, std::max(c * c, (1 - c) * (1 - c)), 1e-15);
        EXPECT_NE(sup.kind, SupKind::InteriorVertex);
    }
}

TEST(GeneralSupRisk, ClassicEstimatorHasConstantRisk) {
    const auto est = GeneralEstimator::classic(100);
    const ParamSpace space(1.0);
    const double expected = 1.0 / (4.0 * 11.0 * 11.0);
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i <= kDefaultScanPoints; ++i) {
        const double r = general_risk_at(est, static_cast<double>(i) / kDefaultScanPoints);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LE(hi - lo, 1e-9);
    EXPECT_NEAR(general_sup_risk(est, space).value, expected, 1e-9);
}

TEST(GeneralSupRisk, Errors) {
    EXPECT_THROW(general_sup_risk(GeneralEstimator({0.5}), ParamSpace(1.0)), std::invalid_argument);
    EXPECT_THROW(general_sup_risk(GeneralEstimator({0.5, 0.5}), ParamSpace(1.0), 15), std::invalid_argument);
    EXPECT_THROW(general_risk_at(GeneralEstimator({0.5, 0.5}), 1.5), std::domain_error);
}

TEST(MonteCarloRisk, DegenerateIsExact) {
    const auto mc = monte_carlo_risk(GeneralEstimator({0.0, 0.0}), 0.0, 1000, 99);
    EXPECT_EQ(mc.mean, 0.0);
    EXPECT_EQ(mc.std_error, 0.0);
}

TEST(MonteCarloRisk, ConstantRiskEstimator) {
    const auto mc = monte_carlo_risk(GeneralEstimator({0.25, 0.75}), 0.3, 1000000, 7);
    EXPECT_LE(std::abs(mc.mean - 1.0 / 16.0), 4 * mc.std_error);
}

TEST(MonteCarloRisk, MleAtHalf) {
    const auto mc = monte_carlo_risk(GeneralEstimator({0.0, 1.0}), 0.5, 1000000, 8);
    EXPECT_LE(std::abs(mc.mean - 0.25), 4 * mc.std_error);
}

TEST(MonteCarloRisk, AgreesWithExactRiskOnRandomInputs) {
    oracle::Sampler rng(33);
    for (int s = 0; s < 10; ++s) {
        const BinaryEstimator est{rng.uniform(), rng.uniform()};
        const double theta = rng.uniform();
        const auto mc = monte_carlo_risk(GeneralEstimator::from_binary(est), theta, 200000, 100 + s);
        EXPECT_LE(std::abs(mc.mean - risk_at(est, theta)), 4 * mc.std_error);
    }
    const auto est = GeneralEstimator::classic(10);
    const auto mc = monte_carlo_risk(est, 0.37, 200000, 5);
    EXPECT_LE(std::abs(mc.mean - general_risk_at(est, 0.37)), 4 * mc.std_error);
}

TEST(MonteCarloRisk, ReproducibleForSeed) {
    const GeneralEstimator est({0.1, 0.6, 0.9});
    const auto first = monte_carlo_risk(est, 0.4, 5000, 42);
    const auto second = monte_carlo_risk(est, 0.4, 5000, 42);
    const auto other = monte_carlo_risk(est, 0.4, 5000, 43);
    EXPECT_EQ(first.mean, second.mean);
    EXPECT_EQ(first.std_error, second.std_error);
    EXPECT_NE(first.mean, other.mean);
}

TEST(MonteCarloRisk, Errors) {
    const GeneralEstimator est({0.1, 0.6});
    EXPECT_THROW(monte_carlo_risk(est, -0.1, 10, 1), std::domain_error);
    EXPECT_THROW(monte_carlo_risk(est, 0.5, 0, 1), std::invalid_argument);
    EXPECT_TRUE(std::isinf(monte_carlo_risk(est, 0.5, 1, 1).std_error));
}

}  // namespace
}  // namespace bernmm
