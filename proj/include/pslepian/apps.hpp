#pragma once

#include "pslepian/oracle.hpp"

#include <optional>
#include <string_view>

namespace pslepian {

/**
 * P(max over window nodes of W_t >= u). The maximum is taken over grid
 * nodes only, so every estimate here is biased low relative to the
 * continuous-time crossing probability.
 */
struct CrossingSpec {
    TimeGrid grid;
    double u = 0.0;
    std::optional<KernelElement> tilt;
    McConfig mc;
};

struct CrossingEstimate {
    McEstimate estimate;
    // no crossing (or every path crossed) so the standard error is degenerate
    bool rare_event = false;
};

CrossingEstimate crossing_prob_plain(const CrossingSpec& spec);

// Samples W, evaluates the indicator on W+h and weights it by
// exp(-log_density(h, W+h)). With h = 0 this reproduces the plain estimate path for path.
CrossingEstimate crossing_prob_is(const CrossingSpec& spec);

enum class TestStatistic { SupNorm, Endpoint };
enum class PowerMethod { Direct, Reweighted };

TestStatistic parse_statistic(std::string_view s);
std::string_view to_string(TestStatistic s);

double evaluate_statistic(TestStatistic stat, std::span<const double> w);

struct PowerReport {
    double critical_value = 0.0;
    std::optional<McEstimate> direct;
    std::optional<McEstimate> reweighted;
};

// Critical value from n H0 paths, then P(stat > critical) under W+h.
PowerReport power_under_shift(const KernelElement& h, TestStatistic stat, double alpha, const McConfig& cfg,
                              bool direct = true, bool reweighted = true);

} // namespace pslepian
