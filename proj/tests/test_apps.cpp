#include "pslepian/apps.hpp"
#include "pslepian/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pslepian;

namespace {

McConfig mc(std::uint64_t seed, std::size_t n, unsigned workers = 1) { return McConfig{seed, n, workers, SamplerKind::Diff}; }

double combined(const McEstimate& a, const McEstimate& b) { return std::hypot(a.std_error, b.std_error); }

} // namespace

TEST(Crossing, ExtremeLevels) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const CrossingEstimate high = crossing_prob_plain({g, 10.0, std::nullopt, mc(1, 2000)});
    EXPECT_EQ(high.estimate.mean, 0.0);
    EXPECT_TRUE(high.rare_event);
    const CrossingEstimate low = crossing_prob_plain({g, -10.0, std::nullopt, mc(1, 2000)});
    EXPECT_EQ(low.estimate.mean, 1.0);
    EXPECT_TRUE(low.rare_event);
}

TEST(Crossing, BracketedByEndpointAndUnionBounds) {
    const TimeGrid g = TimeGrid::make(64, 0.5);
    const CrossingEstimate e = crossing_prob_plain({g, 1.0, std::nullopt, mc(2, 20000)});
    const double endpoint = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
    EXPECT_GT(e.estimate.mean, endpoint);
    EXPECT_LT(e.estimate.mean, 1.0);
    EXPECT_FALSE(e.rare_event);
}

TEST(Crossing, ZeroTiltReproducesPlainPathForPath) {
    const TimeGrid g = TimeGrid::make(30, 0.6);
    const CrossingEstimate plain = crossing_prob_plain({g, 0.8, std::nullopt, mc(5, 5000)});
    const CrossingEstimate is = crossing_prob_is({g, 0.8, KernelElement::constant(g, 0.0), mc(5, 5000)});
    EXPECT_EQ(plain.estimate.mean, is.estimate.mean);
    EXPECT_EQ(plain.estimate.std_error, is.estimate.std_error);
}

TEST(Crossing, ImportanceSamplingAgreesWithPlain) {
    const TimeGrid g = TimeGrid::make(64, 0.5);
    const CrossingEstimate plain = crossing_prob_plain({g, 1.0, std::nullopt, mc(6, 30000)});
    const CrossingEstimate is = crossing_prob_is({g, 1.0, KernelElement::constant(g, 1.0), mc(7, 30000)});
    EXPECT_LT(std::abs(plain.estimate.mean - is.estimate.mean), 3 * combined(plain.estimate, is.estimate));
}

TEST(Crossing, ImportanceSamplingAgreesInTheTail) {
    const TimeGrid g = TimeGrid::make(64, 0.5);
    const CrossingEstimate plain = crossing_prob_plain({g, 3.0, std::nullopt, mc(8, 20000)});
    const CrossingEstimate is = crossing_prob_is({g, 3.0, KernelElement::constant(g, 3.0), mc(8, 20000)});
    EXPECT_GT(is.estimate.mean, 0.0);
    EXPECT_LT(std::abs(plain.estimate.mean - is.estimate.mean), 4 * combined(plain.estimate, is.estimate));
}

TEST(Crossing, Preconditions) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    EXPECT_THROW(crossing_prob_plain({g, 1.0, std::nullopt, mc(1, 1)}), PreconditionError);
    EXPECT_THROW(crossing_prob_plain({g, NAN, std::nullopt, mc(1, 100)}), PreconditionError);
    EXPECT_THROW(crossing_prob_is({g, 1.0, std::nullopt, mc(1, 100)}), PreconditionError);
    const TimeGrid other = TimeGrid::make(16, 0.5);
    EXPECT_THROW(crossing_prob_is({g, 1.0, KernelElement::constant(other, 1.0), mc(1, 100)}), PreconditionError);
}

TEST(Statistic, Evaluation) {
    const std::vector<double> w{0.3, -1.5, 0.2};
    EXPECT_EQ(evaluate_statistic(TestStatistic::SupNorm, w), 1.5);
    EXPECT_EQ(evaluate_statistic(TestStatistic::Endpoint, w), 0.2);
    EXPECT_EQ(parse_statistic("supNorm"), TestStatistic::SupNorm);
    EXPECT_EQ(parse_statistic("endpoint"), TestStatistic::Endpoint);
    EXPECT_EQ(to_string(TestStatistic::Endpoint), "endpoint");
    EXPECT_THROW(parse_statistic("max"), PreconditionError);
}

TEST(Power, NullShiftGivesLevel) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const PowerReport r = power_under_shift(KernelElement::constant(g, 0.0), TestStatistic::SupNorm, 0.05, mc(3, 20000));
    ASSERT_TRUE(r.direct && r.reweighted);
    EXPECT_LT(std::abs(r.direct->mean - 0.05), 3 * r.direct->std_error);
    EXPECT_LT(std::abs(r.reweighted->mean - 0.05), 3 * r.reweighted->std_error);
}

TEST(Power, DirectAgreesWithReweighted) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    for (TestStatistic stat : {TestStatistic::SupNorm, TestStatistic::Endpoint}) {
        const PowerReport r = power_under_shift(KernelElement::constant(g, 1.0), stat, 0.05, mc(4, 20000));
        EXPECT_LT(std::abs(r.direct->mean - r.reweighted->mean), 3 * combined(*r.direct, *r.reweighted));
    }
}

TEST(Power, IncreasesWithShift) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const PowerReport one = power_under_shift(KernelElement::constant(g, 1.0), TestStatistic::SupNorm, 0.05, mc(5, 10000), true, false);
    const PowerReport two = power_under_shift(KernelElement::constant(g, 2.0), TestStatistic::SupNorm, 0.05, mc(5, 10000), true, false);
    EXPECT_GT(two.direct->mean, one.direct->mean);
    EXPECT_FALSE(one.reweighted.has_value());
}

TEST(Power, WorkerInvariant) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const KernelElement h = KernelElement::constant(g, 1.0);
    const PowerReport a = power_under_shift(h, TestStatistic::SupNorm, 0.1, mc(9, 5000, 1));
    const PowerReport b = power_under_shift(h, TestStatistic::SupNorm, 0.1, mc(9, 5000, 4));
    EXPECT_EQ(a.critical_value, b.critical_value);
    EXPECT_EQ(a.direct->mean, b.direct->mean);
    EXPECT_EQ(a.reweighted->mean, b.reweighted->mean);
}

TEST(Power, Preconditions) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const KernelElement h = KernelElement::constant(g, 1.0);
    EXPECT_THROW(power_under_shift(h, TestStatistic::SupNorm, 0.0, mc(1, 100)), PreconditionError);
    EXPECT_THROW(power_under_shift(h, TestStatistic::SupNorm, 1.0, mc(1, 100)), PreconditionError);
    EXPECT_THROW(power_under_shift(h, TestStatistic::SupNorm, 0.05, mc(1, 1)), PreconditionError);
}
