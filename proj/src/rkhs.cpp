#include "pslepian/rkhs.hpp"

#include "pslepian/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace pslepian {

namespace {

double window_sum(const SampledFunction& g) {
    return std::accumulate(g.values.begin(), g.values.end(), 0.0) * g.grid.step();
}

void require_same_window(const TimeGrid& grid, const SampledPath& w, const char* op) {
    require(w.support == Support::Window, std::string(op) + ": path must live on [p,1]");
    require(w.grid == grid, std::string(op) + ": path and shift use different grids");
}

// Numerator of the z coefficient in (c, S_g) coordinates.
double z_numerator(double c, double sg, Variant v) {
    return (v == Variant::Paper ? 3.0 : 2.0) * c + sg;
}

} // namespace

std::string_view to_string(Variant v) { return v == Variant::Paper ? "paper" : "corrected"; }

Variant parse_variant(std::string_view s) {
    if (s == "paper") return Variant::Paper;
    if (s == "corrected") return Variant::Corrected;
    throw PreconditionError("unknown variant '" + std::string(s) + "' (expected paper|corrected)");
}

KernelElement::KernelElement(double c_, SampledFunction g_) : c(c_), g(std::move(g_)), sg_(0.0) {
    require(g.support == Support::Window, "kernel element: g must live on [p,1]");
    require(std::isfinite(c), "kernel element: c must be finite");
    sg_ = window_sum(g);
}

KernelElement KernelElement::constant(const TimeGrid& grid, double c) {
    return KernelElement(c, SampledFunction::zeros(grid, Support::Window));
}

KernelElement KernelElement::linear(const TimeGrid& grid, double slope) {
    return KernelElement(0.0, SampledFunction(grid, Support::Window,
                                              std::vector<double>(cell_count(grid, Support::Window), slope)));
}

std::vector<double> KernelElement::node_values() const {
    std::vector<double> h(static_cast<std::size_t>(grid().window_nodes()));
    h[0] = c;
    double run = 0.0;
    for (std::size_t j = 0; j < g.values.size(); ++j) {
        run += g.values[j];
        h[j + 1] = c + run * grid().step();
    }
    return h;
}

KernelElement kernel_from_samples(const SampledPath& h) {
    require(h.support == Support::Window, "kernel_from_samples: h must be sampled on [p,1]");
    std::vector<double> slopes(h.values.size() - 1);
    const double inv_step = static_cast<double>(h.grid.cells());
    for (std::size_t j = 0; j < slopes.size(); ++j) slopes[j] = (h.values[j + 1] - h.values[j]) * inv_step;
    return KernelElement(h.values.front(), SampledFunction(h.grid, Support::Window, std::move(slopes)));
}

SourceFunction::SourceFunction(SampledFunction f)
    : f_(std::move(f)), sfp_(0.0), delta_(0.0), nabla_pf_(nabla_p(f_)), nabla_integral_(0.0) {
    const TimeGrid& g = f_.grid;
    const int m = g.cells();
    const int k = g.lag_cells();
    const double p = g.p();
    sfp_ = integrate(f_, 0, k);
    const double s1 = integrate(f_, 0, m);
    const double s1mp = integrate(f_, 0, m - k);
    delta_ = (s1 - sfp_ - s1mp) / (1.0 - p);
    nabla_integral_ = window_sum(nabla_pf_);
    const double expect = delta_ * (1.0 - p);
    if (std::abs(nabla_integral_ - expect) > 1e-10 * (1.0 + std::abs(expect)))
        throw NumericalError("source function: s_{nabla_p f}(1) != delta (1-p) on the grid");
}

KernelElement kernel_from_source(const SourceFunction& f) {
    const double inv_sqrt_p = 1.0 / std::sqrt(f.grid().p());
    std::vector<double> g(f.nabla_pf().values);
    for (double& x : g) x *= inv_sqrt_p;
    return KernelElement(f.sfp() * inv_sqrt_p, SampledFunction(f.grid(), Support::Window, std::move(g)));
}

double norm_sq(const KernelElement& h, Variant variant) {
    const double p = h.grid().p();
    const double lead = 2.0 * h.c + h.sg();
    const double v = p * (lead * lead / (2.0 * (3.0 * p - 1.0)) + 0.5 * l2_norm_sq(h.g));
    return variant == Variant::Paper ? v / p : v;
}

double norm_sq(const SourceFunction& f, Variant variant) {
    const double p = f.grid().p();
    const double lead = 2.0 * f.sfp() + f.delta() * (1.0 - p);
    const double v = lead * lead / (2.0 * (3.0 * p - 1.0)) + 0.5 * l2_norm_sq(f.nabla_pf());
    return variant == Variant::Paper ? v / p : v;
}

SampledFunction minimizer_fstar(const SourceFunction& src) {
    const TimeGrid& g = src.grid();
    const int m = g.cells();
    const int k = g.lag_cells();
    const double p = g.p();
    const double sfp = src.sfp();
    const double delta = src.delta();
    const std::vector<double>& f = src.f().values;

    // shared level of the head and window branches
    const double level = (sfp + 0.5 * (1.0 - p) * delta) / (3.0 * p - 1.0);

    std::vector<double> out(static_cast<std::size_t>(m));
    for (int j = 0; j < m - k; ++j) out[j] = level + 0.5 * (f[j] - f[j + k]);
    if (2 * k > m) {
        const double mid =
            (sfp - (1.0 - p) / (3.0 * p - 1.0) * (sfp - (2.0 * p - 1.0) * delta)) / (2.0 * p - 1.0);
        for (int j = m - k; j < k; ++j) out[j] = mid;
    }
    for (int j = k; j < m; ++j) out[j] = level + 0.5 * (f[j] - f[j - k]);
    return SampledFunction(g, Support::Full, std::move(out));
}

double wiener_integral(const SampledFunction& g, const SampledPath& w) {
    require(g.support == Support::Window && w.support == Support::Window,
            "wiener_integral: integrand and path must live on [p,1]");
    require(g.grid == w.grid, "wiener_integral: integrand and path use different grids");
    double sum = 0.0;
    for (std::size_t j = 0; j < g.values.size(); ++j) sum += g.values[j] * (w.values[j + 1] - w.values[j]);
    return sum;
}

double z_eval(const KernelElement& h, const SampledPath& w, Variant variant) {
    require_same_window(h.grid(), w, "z_eval");
    const double p = h.grid().p();
    const double ends = w.values.front() + w.values.back();
    return p * z_numerator(h.c, h.sg(), variant) * ends / (2.0 * (3.0 * p - 1.0)) +
           0.5 * p * wiener_integral(h.g, w);
}

double z_eval(const SourceFunction& f, const SampledPath& w, Variant variant) {
    require_same_window(f.grid(), w, "z_eval");
    const double p = f.grid().p();
    const double root_p = std::sqrt(p);
    // the formula is written in terms of nabla_p b = sqrt(p) w
    const double num = (variant == Variant::Paper ? 3.0 : 2.0) * f.sfp() + f.nabla_integral();
    const double kappa = num / (2.0 * (3.0 * p - 1.0));
    const double ends = root_p * (w.values.front() + w.values.back());
    return kappa * ends + 0.5 * root_p * wiener_integral(f.nabla_pf(), w);
}

LogDensityResult log_density(const KernelElement& h, const SampledPath& w, Variant variant) {
    LogDensityResult r;
    r.quadratic = -0.5 * norm_sq(h, variant);
    r.linear = z_eval(h, w, variant);
    r.log_density = r.quadratic + r.linear;
    r.variant = variant;
    return r;
}

SampledPath shift_path(const SampledPath& w, const KernelElement& h) {
    require_same_window(h.grid(), w, "shift_path");
    const std::vector<double> hv = h.node_values();
    std::vector<double> out(w.values);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += hv[i];
    return SampledPath(w.grid, Support::Window, std::move(out));
}

DensityFunctional::DensityFunctional(const KernelElement& h, Variant variant)
    : variant_(variant), norm_sq_(pslepian::norm_sq(h, variant)) {
    const double p = h.grid().p();
    const std::size_t n = static_cast<std::size_t>(h.grid().window_nodes());
    weights_.assign(n, 0.0);
    const double ends = p * z_numerator(h.c, h.sg(), variant) / (2.0 * (3.0 * p - 1.0));
    weights_.front() += ends;
    weights_.back() += ends;
    // 1/2 p sum g_j (w_{j+1} - w_j), regrouped by node
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double gj = 0.5 * p * h.g.values[j];
        weights_[j] -= gj;
        weights_[j + 1] += gj;
    }
}

double DensityFunctional::z(std::span<const double> w) const {
    require(w.size() == weights_.size(), "density functional: path has the wrong number of nodes");
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) sum += weights_[i] * w[i];
    return sum;
}

} // namespace pslepian
