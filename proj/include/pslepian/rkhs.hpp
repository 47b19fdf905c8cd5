#pragma once

#include "pslepian/grid.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace pslepian {

/**
 * Which constants to use in the norm and in the representer functional z.
 *
 * Corrected: ||h||^2 = V (the infimum of ||g||^2 over generators), and
 *            z-coefficient numerator 2 s_f(p) + s_{nabla_p f}(1).
 * Paper:     ||h||^2 = V / p, numerator 3 s_f(p) + s_{nabla_p f}(1),
 *            reproduced verbatim so the two can be compared numerically.
 */
enum class Variant { Paper, Corrected };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

/// Shift h(t) = c + int_p^t g on [p,1].
struct KernelElement {
    KernelElement(double c, SampledFunction g);

    static KernelElement constant(const TimeGrid& grid, double c);
    // c = 0, g = slope
    static KernelElement linear(const TimeGrid& grid, double slope);

    const TimeGrid& grid() const { return g.grid; }
    // int_p^1 g
    double sg() const { return sg_; }
    // h at the window nodes
    std::vector<double> node_values() const;

    double c;
    SampledFunction g;

private:
    double sg_;
};

// Recovers (c, g) from h sampled on the window nodes: c = h(p) and g the
// cellwise slopes. Exact when h is piecewise linear between nodes.
KernelElement kernel_from_samples(const SampledPath& h);

/// Generator f on [0,1] of the shift (1/sqrt p) nabla_p s_f.
class SourceFunction {
public:
    explicit SourceFunction(SampledFunction f);

    const TimeGrid& grid() const { return f_.grid; }
    const SampledFunction& f() const { return f_; }
    // s_f(p)
    double sfp() const { return sfp_; }
    // (s_f(1) - s_f(p) - s_f(1-p)) / (1-p)
    double delta() const { return delta_; }
    // f(t) - f(t-p) on the window cells
    const SampledFunction& nabla_pf() const { return nabla_pf_; }
    // s_{nabla_p f}(1) = int_p^1 (f(t) - f(t-p)) dt
    double nabla_integral() const { return nabla_integral_; }

private:
    SampledFunction f_;
    double sfp_;
    double delta_;
    SampledFunction nabla_pf_;
    double nabla_integral_;
};

// c = s_f(p)/sqrt(p), g = (f(t) - f(t-p))/sqrt(p).
KernelElement kernel_from_source(const SourceFunction& f);

double norm_sq(const KernelElement& h, Variant variant = Variant::Corrected);
double norm_sq(const SourceFunction& f, Variant variant = Variant::Corrected);

// Minimal-norm generator with nabla_p s_{f*} = nabla_p s_f.
SampledFunction minimizer_fstar(const SourceFunction& f);

// sum over window cells of g * (w(t_{i+1}) - w(t_i))
double wiener_integral(const SampledFunction& g, const SampledPath& w);

double z_eval(const KernelElement& h, const SampledPath& w, Variant variant = Variant::Corrected);
double z_eval(const SourceFunction& f, const SampledPath& w, Variant variant = Variant::Corrected);

struct LogDensityResult {
    double quadratic = 0.0;
    double linear = 0.0;
    double log_density = 0.0;
    Variant variant = Variant::Corrected;
};

LogDensityResult log_density(const KernelElement& h, const SampledPath& w,
                             Variant variant = Variant::Corrected);

SampledPath shift_path(const SampledPath& w, const KernelElement& h);

/**
 * z(h, .) collapsed to node weights so that z(w) = sum_i weight_i w(t_i),
 * plus the quadratic term. Used inside Monte Carlo loops; agrees with
 * z_eval / log_density up to rounding.
 */
class DensityFunctional {
public:
    DensityFunctional(const KernelElement& h, Variant variant);

    Variant variant() const { return variant_; }
    double norm_sq() const { return norm_sq_; }
    const std::vector<double>& weights() const { return weights_; }

    double z(std::span<const double> w) const;
    double log_density(std::span<const double> w) const { return -0.5 * norm_sq_ + z(w); }

private:
    Variant variant_;
    double norm_sq_;
    std::vector<double> weights_;
};

} // namespace pslepian
