#include "pslepian/error.hpp"
#include "pslepian/oracle.hpp"
#include "test_oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pslepian;

namespace {

SourceFunction source(const TimeGrid& g, std::vector<double> v) {
    return SourceFunction(SampledFunction(g, Support::Full, std::move(v)));
}

SourceFunction constant_source(const TimeGrid& g, double v) {
    return source(g, std::vector<double>(static_cast<std::size_t>(g.cells()), v));
}

McConfig mc(std::uint64_t seed, std::size_t n, unsigned workers = 1) { return McConfig{seed, n, workers, SamplerKind::Diff}; }

KernelElement mixed(const TimeGrid& g, double c, unsigned seed) {
    return KernelElement(c, SampledFunction(g, Support::Window, ref::random_cells(g.window_cells(), seed)));
}

} // namespace

TEST(FdNormSq, ConstantShiftIsExactOnEveryGrid) {
    for (int m : {64, 256, 1024}) {
        const TimeGrid g = TimeGrid::make(m, 0.5);
        EXPECT_NEAR(fd_norm_sq(KernelElement::constant(g, 1.0)), 2.0, 1e-8) << m;
    }
}

TEST(FdNormSq, MatchesNormForPiecewiseConstantGenerators) {
    for (auto [m, p] : {std::pair{40, 0.5}, std::pair{50, 0.6}, std::pair{48, 0.75}}) {
        const TimeGrid g = TimeGrid::make(m, p);
        const SlepianCovariance cov(g);
        for (unsigned seed = 0; seed < 4; ++seed) {
            const KernelElement h = mixed(g, 0.5 * seed - 0.7, seed);
            const double v = norm_sq(h);
            EXPECT_NEAR(fd_norm_sq(h, cov), v, 1e-8 * std::max(1.0, v));
        }
    }
}

TEST(FdNormSq, RefinementIsMonotoneForSmoothShifts) {
    // g(t) = sin(2 pi t) averaged per cell; refinement adds constraints, so the norm grows
    auto shift = [](int m) {
        const TimeGrid g = TimeGrid::make(m, 0.5);
        std::vector<double> gv(static_cast<std::size_t>(g.window_cells()));
        const double pi = std::acos(-1.0);
        for (int j = 0; j < g.window_cells(); ++j) {
            const double a = g.node(g.lag_cells() + j), b = g.node(g.lag_cells() + j + 1);
            gv[j] = (std::cos(2 * pi * a) - std::cos(2 * pi * b)) / (2 * pi * (b - a));
        }
        return KernelElement(0.3, SampledFunction(g, Support::Window, gv));
    };
    const double a = fd_norm_sq(shift(16)), b = fd_norm_sq(shift(64)), c = fd_norm_sq(shift(256));
    EXPECT_LE(a, b + 1e-9);
    EXPECT_LE(b, c + 1e-9);
}

TEST(FdLogLr, Identities) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const SlepianCovariance cov(g);
    const KernelElement h = mixed(g, 0.4, 3);
    const SampledPath zero = SampledPath::zeros(g, Support::Window);
    EXPECT_NEAR(fd_log_lr(h, zero, cov), -0.5 * fd_norm_sq(h, cov), 1e-10);
    EXPECT_EQ(fd_log_lr(KernelElement::constant(g, 0.0), zero, cov), 0.0);
    // log N(h,S)(w) - log N(0,S)(w) at w = h is +||h||^2 / 2
    const SampledPath at_h(g, Support::Window, h.node_values());
    EXPECT_NEAR(fd_log_lr(h, at_h, cov), 0.5 * fd_norm_sq(h, cov), 1e-10);
    // and matches the continuous density on piecewise-linear data
    const SampledPath w(g, Support::Window, ref::random_cells(g.window_nodes(), 8));
    EXPECT_NEAR(fd_log_lr(h, w, cov), log_density(h, w).log_density, 1e-9);
}

TEST(Qp, ConstantSource) {
    const TimeGrid g = TimeGrid::make(400, 0.6);
    for (QpMethod method : {QpMethod::Eliminate, QpMethod::Kkt}) {
        const QpResult r = qp_min_norm(constant_source(g, 1.0), method);
        EXPECT_NEAR(r.value, 0.9, 1e-9);
        EXPECT_LE(r.residual, 1e-10);
    }
}

TEST(Qp, MethodsAgreeWithClosedForm) {
    for (auto [m, p] : {std::pair{40, 0.5}, std::pair{50, 0.6}, std::pair{400, 0.75}}) {
        const TimeGrid g = TimeGrid::make(m, p);
        for (unsigned seed = 0; seed < 3; ++seed) {
            const SourceFunction f = source(g, ref::random_cells(m, seed + 20, 2.0));
            const QpResult a = qp_min_norm(f, QpMethod::Eliminate);
            const QpResult b = qp_min_norm(f, QpMethod::Kkt);
            EXPECT_NEAR(a.value, b.value, 1e-8);
            EXPECT_NEAR(a.value, norm_sq(f), 1e-6);
            const SampledFunction fs = minimizer_fstar(f);
            for (int j = 0; j < m; ++j) EXPECT_NEAR(a.g_star.values[j], fs.values[j], 1e-8);
        }
    }
}

TEST(Qp, FeasibilityResidualDetectsViolations) {
    const TimeGrid g = TimeGrid::make(20, 0.6);
    const SourceFunction f = constant_source(g, 1.0);
    EXPECT_LE(feasibility_residual(f.f(), f), 1e-15);
    EXPECT_GT(feasibility_residual(SampledFunction::zeros(g, Support::Full), f), 0.1);
}

TEST(MonteCarlo, RejectsTinyRuns) {
    const TimeGrid g = TimeGrid::make(8, 0.5);
    EXPECT_THROW(mc_expectation(g, [](std::span<const double>) { return 0.0; }, mc(1, 1)), PreconditionError);
}

TEST(MonteCarlo, ExpectationExamples) {
    const TimeGrid g = TimeGrid::make(16, 0.5);
    const McEstimate endpoint = mc_expectation(g, [](std::span<const double> w) { return w.back(); }, mc(3, 50000));
    EXPECT_LT(std::abs(endpoint.mean), 4 * endpoint.std_error);
    const McEstimate sq = mc_expectation(g, [](std::span<const double> w) { return w.back() * w.back(); }, mc(4, 50000));
    EXPECT_LT(std::abs(sq.mean - 1.0), 4 * sq.std_error);
    EXPECT_EQ(sq.n, 50000u);
    EXPECT_EQ(sq.seed, 4u);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResults) {
    const TimeGrid g = TimeGrid::make(40, 0.6);
    const KernelElement h = mixed(g, 1.0, 5);
    const ConditionAReport a = condition_a_residual(h, Variant::Corrected, mc(9, 5000, 1));
    const ConditionAReport b = condition_a_residual(h, Variant::Corrected, mc(9, 5000, 4));
    ASSERT_EQ(a.residuals.size(), b.residuals.size());
    for (std::size_t i = 0; i < a.residuals.size(); ++i) {
        EXPECT_EQ(a.residuals[i].mean, b.residuals[i].mean);
        EXPECT_EQ(a.residuals[i].std_error, b.residuals[i].std_error);
    }
    const auto phi = [](std::span<const double> w) { return *std::max_element(w.begin(), w.end()); };
    const ChangeOfMeasure c1 = change_of_measure(h, phi, mc(2, 3000, 1));
    const ChangeOfMeasure c3 = change_of_measure(h, phi, mc(2, 3000, 3));
    EXPECT_EQ(c1.direct.mean, c3.direct.mean);
    EXPECT_EQ(c1.reweighted.mean, c3.reweighted.mean);
}

TEST(ConditionA, CorrectedHoldsPaperIsOffset) {
    const TimeGrid g = TimeGrid::make(50, 0.6);
    const KernelElement h = kernel_from_source(constant_source(g, 1.0));
    const ConditionAReport corr = condition_a_residual(h, Variant::Corrected, mc(1, 40000));
    EXPECT_LT(corr.max_abs, 4 * corr.max_se);
    const ConditionAReport paper = condition_a_residual(h, Variant::Paper, mc(1, 40000));
    EXPECT_NEAR(paper.mean_offset, h.c / 2, 0.1 * h.c / 2);
    EXPECT_GT(paper.max_abs, 10 * paper.se_at_max);
}

TEST(Isometry, SecondMomentMatchesNorm) {
    const TimeGrid g = TimeGrid::make(50, 0.6);
    for (const KernelElement& h : {KernelElement::constant(g, 1.0), KernelElement::linear(g, 1.0), mixed(g, 0.5, 2)}) {
        const IsometryReport r = isometry_check(h, Variant::Corrected, mc(6, 40000));
        EXPECT_LT(std::abs(r.second_moment.mean - r.target), 4 * r.second_moment.std_error);
    }
}

TEST(DensityNormalization, MeanIsOne) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const McEstimate e = density_normalization(KernelElement::constant(g, 1.0), Variant::Corrected, mc(7, 40000));
    EXPECT_LT(std::abs(e.mean - 1.0), 4 * e.std_error);
}

TEST(ChangeOfMeasure, EndpointUnderShift) {
    const TimeGrid g = TimeGrid::make(32, 0.5);
    const KernelElement h = KernelElement::constant(g, 1.0);
    const ChangeOfMeasure r = change_of_measure(h, [](std::span<const double> w) { return w.back(); }, mc(8, 40000));
    const double se = std::hypot(r.direct.std_error, r.reweighted.std_error);
    EXPECT_LT(std::abs(r.direct.mean - r.reweighted.mean), 4 * se);
    EXPECT_LT(std::abs(r.direct.mean - 1.0), 4 * r.direct.std_error);
}

TEST(FdLogLr, ExponentialHasUnitMean) {
    const TimeGrid g = TimeGrid::make(24, 0.5);
    const SlepianCovariance cov(g);
    const KernelElement h = mixed(g, 0.6, 4);
    const McEstimate e = mc_expectation(
        g, [&](std::span<const double> w) {
            return std::exp(fd_log_lr(h, SampledPath(g, Support::Window, {w.begin(), w.end()}), cov));
        },
        mc(10, 20000));
    EXPECT_LT(std::abs(e.mean - 1.0), 4 * e.std_error);
}
