#include "pslepian/oracle.hpp"

#include "pslepian/error.hpp"

#include <Eigen/LU>

#include <cmath>

namespace pslepian {

namespace {

constexpr std::uint64_t kPhaseDirect = 0xD1;
constexpr std::uint64_t kPhaseReweighted = 0xE2;

void require_n(const McConfig& cfg) {
    require(cfg.n >= 2, "Monte Carlo needs at least 2 paths");
}

// Runs `fn(span w)` -> double over cfg.n sampled window paths.
template <class Fn>
RunningStats collect(const SlepianSampler& sampler, const McConfig& cfg, std::uint64_t seed, Fn&& fn) {
    const int nodes = sampler.grid().window_nodes();
    return map_reduce_paths(cfg.n, cfg.workers, RunningStats{},
                            [&](RunningStats& acc, std::size_t begin, std::size_t end) {
                                std::vector<double> w(static_cast<std::size_t>(nodes));
                                for (std::size_t j = begin; j < end; ++j) {
                                    sampler.sample_into(RngStream{seed, j}, w);
                                    acc.add(fn(std::span<const double>(w)));
                                }
                            });
}

} // namespace

double fd_norm_sq(const KernelElement& h, const SlepianCovariance& cov) {
    require(h.grid() == cov.grid(), "fd_norm_sq: shift and covariance use different grids");
    return cov.quad_form(h.node_values());
}

double fd_norm_sq(const KernelElement& h) { return fd_norm_sq(h, SlepianCovariance(h.grid())); }

double fd_log_lr(const KernelElement& h, const SampledPath& w, const SlepianCovariance& cov) {
    require(h.grid() == cov.grid() && w.grid == cov.grid(), "fd_log_lr: inputs use different grids");
    require(w.support == Support::Window, "fd_log_lr: path must live on [p,1]");
    const std::vector<double> hv = h.node_values();
    const Eigen::VectorXd a = cov.solve(hv);
    const Eigen::Map<const Eigen::VectorXd> wv(w.values.data(), static_cast<Eigen::Index>(w.values.size()));
    const Eigen::Map<const Eigen::VectorXd> hvec(hv.data(), static_cast<Eigen::Index>(hv.size()));
    return a.dot(wv) - 0.5 * a.dot(hvec);
}

double feasibility_residual(const SampledFunction& g, const SourceFunction& f) {
    require(g.grid == f.grid() && g.support == Support::Full, "feasibility_residual: g must live on f's grid");
    const SampledPath lhs = nabla_p(cumulative_s(g));
    const SampledPath rhs = nabla_p(cumulative_s(f.f()));
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
        worst = std::max(worst, std::abs(lhs.values[i] - rhs.values[i]));
    return worst;
}

QpResult qp_min_norm(const SourceFunction& f, QpMethod method) {
    const TimeGrid& grid = f.grid();
    const int m = grid.cells();
    const int k = grid.lag_cells();
    const double step = grid.step();
    const std::vector<double>& phi = f.nabla_pf().values;
    std::vector<double> g(static_cast<std::size_t>(m), 0.0);

    if (method == QpMethod::Eliminate) {
        // x = (head cells u, middle cells v); window cell k+i equals u_i + phi_i.
        // minimize sum u^2 + sum (u + phi)^2 + sum v^2  s.t.  step (sum u + sum v) = s_f(p)
        const int head = m - k;
        const int mid = 2 * k - m;
        const int nx = head + mid;
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nx + 1, nx + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nx + 1);
        for (int i = 0; i < head; ++i) {
            kkt(i, i) = 4.0;
            rhs(i) = -2.0 * phi[i];
        }
        for (int i = head; i < nx; ++i) kkt(i, i) = 2.0;
        for (int i = 0; i < nx; ++i) {
            kkt(i, nx) = step;
            kkt(nx, i) = step;
        }
        rhs(nx) = f.sfp();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
        const Eigen::VectorXd x = lu.solve(rhs);
        if (!x.allFinite()) throw NumericalError("qp_min_norm: reduced KKT system is singular");
        for (int i = 0; i < head; ++i) {
            g[i] = x(i);
            g[k + i] = x(i) + phi[i];
        }
        for (int i = head; i < nx; ++i) g[i] = x(i);
    } else {
        // rows: s_g(p) = s_f(p), then g_j - g_{j-k} = phi_j on every window cell
        const int rows = m - k + 1;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, m);
        Eigen::VectorXd b(rows);
        for (int j = 0; j < k; ++j) a(0, j) = step;
        b(0) = f.sfp();
        for (int r = 1; r < rows; ++r) {
            const int j = k + r - 1;
            a(r, j) = 1.0;
            a(r, j - k) = -1.0;
            b(r) = phi[j - k];
        }
        const Eigen::MatrixXd gram = a * a.transpose();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw NumericalError("qp_min_norm: constraint Gram matrix is singular");
        const Eigen::VectorXd y = ldlt.solve(b);
        const Eigen::VectorXd x = a.transpose() * y;
        for (int j = 0; j < m; ++j) g[j] = x(j);
    }

    SampledFunction g_star(grid, Support::Full, std::move(g));
    const double residual = feasibility_residual(g_star, f);
    const double value = l2_norm_sq(g_star);
    return QpResult{std::move(g_star), value, residual};
}

McEstimate mc_expectation(const TimeGrid& grid, const PathFunctional& functional, const McConfig& cfg) {
    require_n(cfg);
    const SlepianSampler sampler(grid, cfg.sampler);
    return collect(sampler, cfg, cfg.seed, functional).estimate(cfg.seed);
}

ConditionAReport condition_a_residual(const KernelElement& h, Variant variant, const McConfig& cfg) {
    require_n(cfg);
    const TimeGrid& grid = h.grid();
    const SlepianSampler sampler(grid, cfg.sampler);
    const DensityFunctional dz(h, variant);
    const std::size_t nodes = static_cast<std::size_t>(grid.window_nodes());

    StatsVector zero;
    zero.items.resize(nodes);
    const StatsVector acc =
        map_reduce_paths(cfg.n, cfg.workers, zero, [&](StatsVector& a, std::size_t begin, std::size_t end) {
            std::vector<double> w(nodes);
            for (std::size_t j = begin; j < end; ++j) {
                sampler.sample_into(RngStream{cfg.seed, j}, w);
                const double z = dz.z(w);
                for (std::size_t i = 0; i < nodes; ++i) a.items[i].add(w[i] * z);
            }
        });

    const std::vector<double> hv = h.node_values();
    ConditionAReport report;
    report.residuals.reserve(nodes);
    double offset_sum = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        McEstimate e = acc.items[i].estimate(cfg.seed);
        e.mean -= hv[i];
        offset_sum += e.mean;
        report.max_se = std::max(report.max_se, e.std_error);
        if (std::abs(e.mean) > report.max_abs) {
            report.max_abs = std::abs(e.mean);
            report.se_at_max = e.std_error;
            report.argmax = i;
        }
        report.residuals.push_back(e);
    }
    report.mean_offset = offset_sum / static_cast<double>(nodes);
    return report;
}

IsometryReport isometry_check(const KernelElement& h, Variant variant, const McConfig& cfg) {
    require_n(cfg);
    const SlepianSampler sampler(h.grid(), cfg.sampler);
    const DensityFunctional dz(h, variant);
    const RunningStats s = collect(sampler, cfg, cfg.seed, [&](std::span<const double> w) {
        const double z = dz.z(w);
        return z * z;
    });
    return IsometryReport{s.estimate(cfg.seed), norm_sq(h, variant)};
}

McEstimate density_normalization(const KernelElement& h, Variant variant, const McConfig& cfg) {
    require_n(cfg);
    const SlepianSampler sampler(h.grid(), cfg.sampler);
    const DensityFunctional dz(h, variant);
    return collect(sampler, cfg, cfg.seed, [&](std::span<const double> w) { return std::exp(dz.log_density(w)); })
        .estimate(cfg.seed);
}

ChangeOfMeasure change_of_measure(const KernelElement& h, const PathFunctional& phi, const McConfig& cfg) {
    require_n(cfg);
    const SlepianSampler sampler(h.grid(), cfg.sampler);
    const DensityFunctional dz(h, Variant::Corrected);
    const std::vector<double> hv = h.node_values();

    const std::uint64_t seed_direct = derive_seed(cfg.seed, kPhaseDirect);
    const RunningStats direct = collect(sampler, cfg, seed_direct, [&](std::span<const double> w) {
        thread_local std::vector<double> shifted;
        shifted.assign(w.begin(), w.end());
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += hv[i];
        return phi(shifted);
    });
    const std::uint64_t seed_rw = derive_seed(cfg.seed, kPhaseReweighted);
    const RunningStats rw = collect(sampler, cfg, seed_rw, [&](std::span<const double> w) {
        return phi(w) * std::exp(dz.log_density(w));
    });
    return ChangeOfMeasure{direct.estimate(cfg.seed), rw.estimate(cfg.seed)};
}

} // namespace pslepian
