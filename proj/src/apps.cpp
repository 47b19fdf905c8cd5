#include "pslepian/apps.hpp"

#include "pslepian/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pslepian {

namespace {

constexpr std::uint64_t kPhaseCrossing = 0xC0;
constexpr std::uint64_t kPhaseNull = 0xA0;
constexpr std::uint64_t kPhasePowerDirect = 0xA1;
constexpr std::uint64_t kPhasePowerReweighted = 0xA2;

double node_max(std::span<const double> w) { return *std::max_element(w.begin(), w.end()); }

void check_spec(const CrossingSpec& spec) {
    require(spec.mc.n >= 2, "crossing: need at least 2 paths");
    require(std::isfinite(spec.u), "crossing: level u must be finite");
}

template <class Fn>
RunningStats run_paths(const SlepianSampler& sampler, const McConfig& cfg, std::uint64_t seed, Fn&& fn) {
    const std::size_t nodes = static_cast<std::size_t>(sampler.grid().window_nodes());
    return map_reduce_paths(cfg.n, cfg.workers, RunningStats{},
                            [&](RunningStats& acc, std::size_t begin, std::size_t end) {
                                std::vector<double> w(nodes);
                                for (std::size_t j = begin; j < end; ++j) {
                                    sampler.sample_into(RngStream{seed, j}, w);
                                    acc.add(fn(w));
                                }
                            });
}

} // namespace

CrossingEstimate crossing_prob_plain(const CrossingSpec& spec) {
    check_spec(spec);
    const SlepianSampler sampler(spec.grid, spec.mc.sampler);
    const std::uint64_t seed = derive_seed(spec.mc.seed, kPhaseCrossing);
    const RunningStats s =
        run_paths(sampler, spec.mc, seed, [&](std::span<double> w) { return node_max(w) >= spec.u ? 1.0 : 0.0; });
    CrossingEstimate out{s.estimate(spec.mc.seed), false};
    out.rare_event = out.estimate.mean == 0.0 || out.estimate.mean == 1.0;
    return out;
}

CrossingEstimate crossing_prob_is(const CrossingSpec& spec) {
    check_spec(spec);
    require(spec.tilt.has_value(), "crossing_prob_is: a tilt shift is required");
    require(spec.tilt->grid() == spec.grid, "crossing_prob_is: tilt lives on a different grid");
    const SlepianSampler sampler(spec.grid, spec.mc.sampler);
    const DensityFunctional dz(*spec.tilt, Variant::Corrected);
    const std::vector<double> hv = spec.tilt->node_values();
    const std::uint64_t seed = derive_seed(spec.mc.seed, kPhaseCrossing);
    const RunningStats s = run_paths(sampler, spec.mc, seed, [&](std::span<double> w) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += hv[i];
        if (node_max(w) < spec.u) return 0.0;
        return std::exp(-dz.log_density(w));
    });
    CrossingEstimate out{s.estimate(spec.mc.seed), false};
    out.rare_event = out.estimate.std_error == 0.0;
    return out;
}

TestStatistic parse_statistic(std::string_view s) {
    if (s == "supNorm") return TestStatistic::SupNorm;
    if (s == "endpoint") return TestStatistic::Endpoint;
    throw PreconditionError("unknown test statistic '" + std::string(s) + "' (expected supNorm|endpoint)");
}

std::string_view to_string(TestStatistic s) { return s == TestStatistic::SupNorm ? "supNorm" : "endpoint"; }

double evaluate_statistic(TestStatistic stat, std::span<const double> w) {
    if (stat == TestStatistic::Endpoint) return w.back();
    double best = 0.0;
    for (double x : w) best = std::max(best, std::abs(x));
    return best;
}

PowerReport power_under_shift(const KernelElement& h, TestStatistic stat, double alpha, const McConfig& cfg,
                              bool direct, bool reweighted) {
    require(alpha > 0.0 && alpha < 1.0, "power: alpha must lie in (0,1)");
    require(cfg.n >= 2, "power: need at least 2 paths");
    const TimeGrid& grid = h.grid();
    const SlepianSampler sampler(grid, cfg.sampler);
    const std::size_t nodes = static_cast<std::size_t>(grid.window_nodes());

    // H0 sample for the critical value; stored by path index so the quantile
    // does not depend on the worker count.
    std::vector<double> null_stats(cfg.n);
    const std::uint64_t seed_null = derive_seed(cfg.seed, kPhaseNull);
    struct Nothing {
        void merge(const Nothing&) {}
    };
    map_reduce_paths(cfg.n, cfg.workers, Nothing{}, [&](Nothing&, std::size_t begin, std::size_t end) {
        std::vector<double> w(nodes);
        for (std::size_t j = begin; j < end; ++j) {
            sampler.sample_into(RngStream{seed_null, j}, w);
            null_stats[j] = evaluate_statistic(stat, w);
        }
    });
    std::sort(null_stats.begin(), null_stats.end());
    const auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(cfg.n)));
    PowerReport report;
    report.critical_value = null_stats[std::clamp<std::size_t>(rank, 1, cfg.n) - 1];
    const double crit = report.critical_value;

    if (direct) {
        const std::vector<double> hv = h.node_values();
        const std::uint64_t seed = derive_seed(cfg.seed, kPhasePowerDirect);
        const RunningStats s = run_paths(sampler, cfg, seed, [&](std::span<double> w) {
            for (std::size_t i = 0; i < w.size(); ++i) w[i] += hv[i];
            return evaluate_statistic(stat, w) > crit ? 1.0 : 0.0;
        });
        report.direct = s.estimate(cfg.seed);
    }
    if (reweighted) {
        const DensityFunctional dz(h, Variant::Corrected);
        const std::uint64_t seed = derive_seed(cfg.seed, kPhasePowerReweighted);
        const RunningStats s = run_paths(sampler, cfg, seed, [&](std::span<double> w) {
            return evaluate_statistic(stat, w) > crit ? std::exp(dz.log_density(w)) : 0.0;
        });
        report.reweighted = s.estimate(cfg.seed);
    }
    return report;
}

} // namespace pslepian
