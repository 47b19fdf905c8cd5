#pragma once

#include <array>
#include <span>
#include <vector>

namespace pslepian {

/**
 * Uniform grid on [0,1] with m cells and the lag p sitting on node k = p*m.
 *
 * Three cell ranges matter throughout:
 *   head   [0, 1-p]  cells 0 .. m-k-1
 *   middle (1-p, p)  cells m-k .. k-1   (empty when p = 1/2)
 *   window [p, 1]    cells k .. m-1
 * The window [p,1] has nodes k..m.
 */
class TimeGrid {
public:
    // m >= 2, 1/2 <= p < 1, p*m integral to 1e-12.
    static TimeGrid make(int m, double p);

    int cells() const { return m_; }
    int lag_cells() const { return k_; }
    double p() const { return p_; }
    double step() const { return 1.0 / m_; }
    double node(int i) const { return static_cast<double>(i) / m_; }

    int window_nodes() const { return m_ - k_ + 1; }
    int window_cells() const { return m_ - k_; }
    int head_cells() const { return m_ - k_; }
    int middle_cells() const { return 2 * k_ - m_; }

    bool operator==(const TimeGrid& o) const { return m_ == o.m_ && k_ == o.k_; }

private:
    TimeGrid(int m, int k, double p) : m_(m), k_(k), p_(p) {}
    int m_;
    int k_;
    double p_;
};

enum class Support { Full, Window };

// Piecewise-constant L2 function: one value per cell of its support.
struct SampledFunction {
    SampledFunction(const TimeGrid& g, Support s, std::vector<double> v);
    static SampledFunction zeros(const TimeGrid& g, Support s);

    TimeGrid grid;
    Support support;
    std::vector<double> values;

    // global index of the first cell of the support
    int first_cell() const { return support == Support::Full ? 0 : grid.lag_cells(); }
    // value on global cell j
    double at_cell(int j) const { return values[j - first_cell()]; }
};

// Continuous path sampled at the nodes of its support.
struct SampledPath {
    SampledPath(const TimeGrid& g, Support s, std::vector<double> v);
    static SampledPath zeros(const TimeGrid& g, Support s);

    TimeGrid grid;
    Support support;
    std::vector<double> values;

    int first_node() const { return support == Support::Full ? 0 : grid.lag_cells(); }
    double at_node(int i) const { return values[i - first_node()]; }
};

std::size_t cell_count(const TimeGrid& g, Support s);
std::size_t node_count(const TimeGrid& g, Support s);

// Exact integral of f over [t_a, t_b]; a, b are global node indices.
double integrate(const SampledFunction& f, int a, int b);

double l2_norm_sq(const SampledFunction& f);
double inner(const SampledFunction& f, const SampledFunction& g);

// s_f(t_i) = integral of f over [0, t_i].
SampledPath cumulative_s(const SampledFunction& f);

// (F(t) - F(t-p)) on the window nodes.
SampledPath nabla_p(const SampledPath& F);

// Cellwise f(t) - f(t-p) on the window cells.
SampledFunction nabla_p(const SampledFunction& f);

/**
 * Orthogonal split f = alpha 1_head + a + beta 1_mid + b + gamma 1_win + c,
 * with a, b, c integrating to zero on their ranges. Every part is stored on
 * the full grid, zero outside its range. At p = 1/2 the middle range is
 * empty and beta = 0.
 */
struct CanonicalDecomposition {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    SampledFunction a;
    SampledFunction b;
    SampledFunction c;

    // alpha-step, a, beta-step, b, gamma-step, c
    std::array<SampledFunction, 6> parts() const;
};

CanonicalDecomposition decompose_f(const SampledFunction& f);

} // namespace pslepian
