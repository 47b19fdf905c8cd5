#include "pslepian/error.hpp"
#include "pslepian/grid.hpp"
#include "test_oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pslepian;

namespace {

SampledFunction full(const TimeGrid& g, std::vector<double> v) { return SampledFunction(g, Support::Full, std::move(v)); }

SampledPath path_of(const TimeGrid& g, double (*fn)(double)) {
    std::vector<double> v(static_cast<std::size_t>(g.cells()) + 1);
    for (int i = 0; i <= g.cells(); ++i) v[i] = fn(g.node(i));
    return SampledPath(g, Support::Full, std::move(v));
}

} // namespace

TEST(TimeGrid, MakeOnGrid) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    EXPECT_EQ(g.lag_cells(), 6);
    EXPECT_DOUBLE_EQ(g.step(), 0.1);
    EXPECT_EQ(g.window_nodes(), 5);
    EXPECT_EQ(g.middle_cells(), 2);

    const TimeGrid h = TimeGrid::make(8, 0.5);
    EXPECT_EQ(h.lag_cells(), 4);
    EXPECT_EQ(h.middle_cells(), 0);
}

TEST(TimeGrid, RejectsBadConfigurations) {
    EXPECT_THROW(TimeGrid::make(10, 0.55), PreconditionError);
    EXPECT_THROW(TimeGrid::make(10, 1.0), PreconditionError);
    EXPECT_THROW(TimeGrid::make(10, 0.4), PreconditionError);
    EXPECT_THROW(TimeGrid::make(1, 0.5), PreconditionError);
    EXPECT_THROW(TimeGrid::make(10, std::nan("")), PreconditionError);
}

TEST(SampledFunction, LengthMustMatchSupport) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    EXPECT_THROW(full(g, std::vector<double>(9, 1.0)), PreconditionError);
    EXPECT_NO_THROW(SampledFunction(g, Support::Window, std::vector<double>(4, 1.0)));
    EXPECT_THROW(SampledPath(g, Support::Window, std::vector<double>(4, 1.0)), PreconditionError);
}

TEST(Integrate, Examples) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    const auto one = full(g, std::vector<double>(10, 1.0));
    EXPECT_DOUBLE_EQ(integrate(one, 0, 10), 1.0);
    EXPECT_DOUBLE_EQ(integrate(one, 0, 6), 0.6);
    EXPECT_DOUBLE_EQ(integrate(SampledFunction::zeros(g, Support::Full), 0, 10), 0.0);
}

TEST(Integrate, RejectsIntervalOutsideSupport) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    const auto win = SampledFunction(g, Support::Window, std::vector<double>(4, 1.0));
    EXPECT_THROW(integrate(win, 0, 10), PreconditionError);
    EXPECT_DOUBLE_EQ(integrate(win, 6, 10), 0.4);
    EXPECT_THROW(integrate(win, 8, 7), PreconditionError);
}

TEST(Integrate, LinearAndMonotone) {
    const TimeGrid g = TimeGrid::make(40, 0.75);
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto a = ref::random_cells(40, seed);
        const auto b = ref::random_cells(40, seed + 100);
        std::vector<double> comb(40), bigger(40);
        for (int j = 0; j < 40; ++j) {
            comb[j] = 2.5 * a[j] - 0.5 * b[j];
            bigger[j] = a[j] + std::abs(b[j]);
        }
        const double ia = integrate(full(g, a), 3, 37);
        const double ib = integrate(full(g, b), 3, 37);
        EXPECT_NEAR(integrate(full(g, comb), 3, 37), 2.5 * ia - 0.5 * ib, 1e-13);
        EXPECT_GE(integrate(full(g, bigger), 3, 37), ia);
    }
}

TEST(CumulativeS, Examples) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    const SampledPath s1 = cumulative_s(full(g, std::vector<double>(10, 1.0)));
    for (int i = 0; i <= 10; ++i) EXPECT_NEAR(s1.values[i], g.node(i), 1e-15);

    const SampledPath s0 = cumulative_s(SampledFunction::zeros(g, Support::Full));
    for (double v : s0.values) EXPECT_EQ(v, 0.0);

    std::vector<double> half(10, 0.0);
    for (int j = 0; j < 5; ++j) half[j] = 1.0;
    EXPECT_DOUBLE_EQ(cumulative_s(full(g, half)).values.back(), 0.5);
    EXPECT_EQ(cumulative_s(full(g, half)).values.front(), 0.0);
}

TEST(NablaP, PathExamples) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    const SampledPath sq = nabla_p(path_of(g, [](double t) { return t * t; }));
    ASSERT_EQ(sq.values.size(), 5u);
    EXPECT_NEAR(sq.at_node(8), 0.6, 1e-14);

    for (double v : nabla_p(path_of(g, [](double) { return 3.0; })).values) EXPECT_EQ(v, 0.0);
    for (double v : nabla_p(path_of(g, [](double t) { return t; })).values) EXPECT_NEAR(v, 0.6, 1e-15);
}

TEST(NablaP, RejectsWindowInput) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    EXPECT_THROW(nabla_p(SampledPath::zeros(g, Support::Window)), PreconditionError);
}

TEST(NablaP, TelescopingIdentity) {
    for (auto [m, p] : {std::pair{10, 0.6}, std::pair{16, 0.5}, std::pair{64, 0.75}, std::pair{50, 0.9}}) {
        const TimeGrid g = TimeGrid::make(m, p);
        const int k = g.lag_cells();
        for (unsigned seed = 0; seed < 5; ++seed) {
            const auto f = full(g, ref::random_cells(m, seed));
            const SampledPath lhs = nabla_p(cumulative_s(f));
            const double sfp = integrate(f, 0, k);
            double acc = 0.0;
            for (int i = k; i <= m; ++i) {
                EXPECT_NEAR(lhs.at_node(i), sfp + acc, 1e-13);
                if (i < m) acc += (f.values[i] - f.values[i - k]) * g.step();
            }
        }
    }
}

TEST(Decompose, ConstantFunction) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    const auto d = decompose_f(full(g, std::vector<double>(10, 1.0)));
    EXPECT_NEAR(d.alpha, 1.0, 1e-15);
    EXPECT_NEAR(d.beta, 1.0, 1e-15);
    EXPECT_NEAR(d.gamma, 1.0, 1e-15);
    for (const auto* part : {&d.a, &d.b, &d.c})
        for (double v : part->values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Decompose, HeadIndicator) {
    const TimeGrid g = TimeGrid::make(10, 0.6);
    std::vector<double> v(10, 0.0);
    for (int j = 0; j < 4; ++j) v[j] = 1.0;
    const auto d = decompose_f(full(g, v));
    EXPECT_NEAR(d.alpha, 1.0, 1e-15);
    EXPECT_EQ(d.beta, 0.0);
    EXPECT_EQ(d.gamma, 0.0);
}

TEST(Decompose, AlphaBetaGammaFromCumulativeIntegrals) {
    const TimeGrid g = TimeGrid::make(20, 0.65);
    const auto f = full(g, ref::random_cells(20, 7));
    const auto d = decompose_f(f);
    const SampledPath s = cumulative_s(f);
    const int k = g.lag_cells();
    const double p = g.p();
    EXPECT_NEAR(d.alpha, s.values[20 - k] / (1 - p), 1e-13);
    EXPECT_NEAR(d.beta, (s.values[k] - s.values[20 - k]) / (2 * p - 1), 1e-13);
    EXPECT_NEAR(d.gamma, (s.values[20] - s.values[k]) / (1 - p), 1e-13);
}

TEST(Decompose, RecomposesAndIsOrthogonal) {
    for (auto [m, p] : {std::pair{10, 0.6}, std::pair{40, 0.5}, std::pair{64, 0.75}}) {
        const TimeGrid g = TimeGrid::make(m, p);
        for (unsigned seed = 0; seed < 5; ++seed) {
            const auto f = full(g, ref::random_cells(m, seed));
            const auto d = decompose_f(f);
            const auto parts = d.parts();
            for (int j = 0; j < m; ++j) {
                double sum = 0.0;
                for (const auto& part : parts) sum += part.values[j];
                EXPECT_NEAR(sum, f.values[j], 1e-12);
            }
            for (std::size_t a = 0; a < parts.size(); ++a)
                for (std::size_t b = a + 1; b < parts.size(); ++b)
                    EXPECT_NEAR(inner(parts[a], parts[b]), 0.0, 1e-12) << "parts " << a << "," << b;
            EXPECT_NEAR(integrate(d.a, 0, m), 0.0, 1e-12);
            EXPECT_NEAR(integrate(d.b, 0, m), 0.0, 1e-12);
            EXPECT_NEAR(integrate(d.c, 0, m), 0.0, 1e-12);
            if (p == 0.5) EXPECT_EQ(d.beta, 0.0);
        }
    }
}
