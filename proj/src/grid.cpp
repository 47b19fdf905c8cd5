#include "pslepian/grid.hpp"

#include "pslepian/error.hpp"

#include <cmath>
#include <string>

namespace pslepian {

TimeGrid TimeGrid::make(int m, double p) {
    require(m >= 2, "grid needs m >= 2 cells, got " + std::to_string(m));
    require(std::isfinite(p) && p >= 0.5 && p < 1.0,
            "p must lie in [1/2, 1), got " + std::to_string(p));
    const double pm = p * m;
    const double k = std::round(pm);
    require(std::abs(pm - k) < 1e-12,
            "p*m must be an integer (p on-grid), got p*m = " + std::to_string(pm));
    return TimeGrid(m, static_cast<int>(k), p);
}

std::size_t cell_count(const TimeGrid& g, Support s) {
    return static_cast<std::size_t>(s == Support::Full ? g.cells() : g.window_cells());
}

std::size_t node_count(const TimeGrid& g, Support s) {
    return static_cast<std::size_t>(s == Support::Full ? g.cells() + 1 : g.window_nodes());
}

SampledFunction::SampledFunction(const TimeGrid& g, Support s, std::vector<double> v)
    : grid(g), support(s), values(std::move(v)) {
    require(values.size() == cell_count(grid, support),
            "function needs " + std::to_string(cell_count(grid, support)) + " cell values, got " +
                std::to_string(values.size()));
}

SampledFunction SampledFunction::zeros(const TimeGrid& g, Support s) {
    return SampledFunction(g, s, std::vector<double>(cell_count(g, s), 0.0));
}

SampledPath::SampledPath(const TimeGrid& g, Support s, std::vector<double> v)
    : grid(g), support(s), values(std::move(v)) {
    require(values.size() == node_count(grid, support),
            "path needs " + std::to_string(node_count(grid, support)) + " node values, got " +
                std::to_string(values.size()));
}

SampledPath SampledPath::zeros(const TimeGrid& g, Support s) {
    return SampledPath(g, s, std::vector<double>(node_count(g, s), 0.0));
}

double integrate(const SampledFunction& f, int a, int b) {
    const int lo = f.first_cell();
    require(a <= b, "integrate: lower node after upper node");
    require(a >= lo && b <= f.grid.cells(), "integrate: interval outside the function's support");
    double sum = 0.0;
    for (int j = a; j < b; ++j) sum += f.at_cell(j);
    return sum * f.grid.step();
}

double inner(const SampledFunction& f, const SampledFunction& g) {
    require(f.grid == g.grid && f.support == g.support, "inner: functions live on different supports");
    double sum = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) sum += f.values[j] * g.values[j];
    return sum * f.grid.step();
}

double l2_norm_sq(const SampledFunction& f) { return inner(f, f); }

SampledPath cumulative_s(const SampledFunction& f) {
    require(f.support == Support::Full, "cumulative_s: f must live on [0,1]");
    std::vector<double> nodes(f.values.size() + 1, 0.0);
    // running sum of cell values, scaled once per node so s_f(t_i) matches integrate(f, 0, i)
    double run = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        run += f.values[j];
        nodes[j + 1] = run * f.grid.step();
    }
    return SampledPath(f.grid, Support::Full, std::move(nodes));
}

SampledPath nabla_p(const SampledPath& F) {
    require(F.support == Support::Full, "nabla_p: path must live on [0,1]");
    const int k = F.grid.lag_cells();
    const int m = F.grid.cells();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m - k + 1));
    for (int i = k; i <= m; ++i) out.push_back(F.values[i] - F.values[i - k]);
    return SampledPath(F.grid, Support::Window, std::move(out));
}

SampledFunction nabla_p(const SampledFunction& f) {
    require(f.support == Support::Full, "nabla_p: function must live on [0,1]");
    const int k = f.grid.lag_cells();
    const int m = f.grid.cells();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m - k));
    for (int j = k; j < m; ++j) out.push_back(f.values[j] - f.values[j - k]);
    return SampledFunction(f.grid, Support::Window, std::move(out));
}

std::array<SampledFunction, 6> CanonicalDecomposition::parts() const {
    const TimeGrid& g = a.grid;
    const int m = g.cells();
    const int k = g.lag_cells();
    auto step_on = [&](double level, int from, int to) {
        std::vector<double> v(static_cast<std::size_t>(m), 0.0);
        for (int j = from; j < to; ++j) v[j] = level;
        return SampledFunction(g, Support::Full, std::move(v));
    };
    return {step_on(alpha, 0, m - k), a, step_on(beta, m - k, k), b, step_on(gamma, k, m), c};
}

CanonicalDecomposition decompose_f(const SampledFunction& f) {
    require(f.support == Support::Full, "decompose_f: f must live on [0,1]");
    const TimeGrid& g = f.grid;
    const int m = g.cells();
    const int k = g.lag_cells();

    auto mean_over = [&](int from, int to) {
        if (from >= to) return 0.0;
        double sum = 0.0;
        for (int j = from; j < to; ++j) sum += f.values[j];
        return sum / (to - from);
    };
    // Averages over cells equal s_f differences divided by interval length.
    const double alpha = mean_over(0, m - k);
    const double beta = mean_over(m - k, k);
    const double gamma = mean_over(k, m);

    auto centered = [&](int from, int to, double level) {
        std::vector<double> v(static_cast<std::size_t>(m), 0.0);
        for (int j = from; j < to; ++j) v[j] = f.values[j] - level;
        return SampledFunction(g, Support::Full, std::move(v));
    };
    return CanonicalDecomposition{alpha, beta, gamma, centered(0, m - k, alpha),
                                  centered(m - k, k, beta), centered(k, m, gamma)};
}

} // namespace pslepian
