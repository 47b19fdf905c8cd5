#pragma once

#include "pslepian/covariance.hpp"
#include "pslepian/montecarlo.hpp"
#include "pslepian/rkhs.hpp"
#include "pslepian/simulate.hpp"

#include <functional>
#include <span>
#include <vector>

namespace pslepian {

// Seed + path count + worker count for a Monte Carlo run.
struct McConfig {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    unsigned workers = 1;
    SamplerKind sampler = SamplerKind::Diff;
};

// h^T Sigma^{-1} h with h at the window nodes.
double fd_norm_sq(const KernelElement& h, const SlepianCovariance& cov);
double fd_norm_sq(const KernelElement& h);

// Log likelihood ratio of N(h, Sigma) against N(0, Sigma) at w.
double fd_log_lr(const KernelElement& h, const SampledPath& w, const SlepianCovariance& cov);

enum class QpMethod {
    Eliminate, // window cells expressed through head cells, one Lagrange multiplier
    Kkt,       // min-norm solution of the full constraint system
};

struct QpResult {
    SampledFunction g_star;
    double value = 0.0;    // ||g_star||^2 on [0,1]
    double residual = 0.0; // max constraint violation
};

// min ||g||^2 subject to nabla_p s_g = nabla_p s_f at every window node.
QpResult qp_min_norm(const SourceFunction& f, QpMethod method = QpMethod::Eliminate);

// max over window nodes of |nabla_p s_g - nabla_p s_f|
double feasibility_residual(const SampledFunction& g, const SourceFunction& f);

using PathFunctional = std::function<double(std::span<const double>)>;

McEstimate mc_expectation(const TimeGrid& grid, const PathFunctional& functional, const McConfig& cfg);

struct ConditionAReport {
    // E[W_t z(h,W)] - h(t) per window node
    std::vector<McEstimate> residuals;
    double max_abs = 0.0;
    double se_at_max = 0.0;
    std::size_t argmax = 0;
    double max_se = 0.0;
    // average residual over nodes
    double mean_offset = 0.0;
};

ConditionAReport condition_a_residual(const KernelElement& h, Variant variant, const McConfig& cfg);

// E[z(h,W)^2] against norm_sq(h, variant).
struct IsometryReport {
    McEstimate second_moment;
    double target = 0.0;
};
IsometryReport isometry_check(const KernelElement& h, Variant variant, const McConfig& cfg);

// E[exp(log_density(h, W))], should be 1.
McEstimate density_normalization(const KernelElement& h, Variant variant, const McConfig& cfg);

// E[phi(W+h)] (direct) and E[phi(W) exp(log_density(h,W))] (reweighted) on independent streams.
struct ChangeOfMeasure {
    McEstimate direct;
    McEstimate reweighted;
};
ChangeOfMeasure change_of_measure(const KernelElement& h, const PathFunctional& phi, const McConfig& cfg);

} // namespace pslepian
