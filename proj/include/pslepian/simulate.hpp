#pragma once

#include "pslepian/covariance.hpp"
#include "pslepian/grid.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace pslepian {

std::uint64_t splitmix64(std::uint64_t x);

// Independent seed for a named phase of an estimator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t phase);

// One reproducible random stream. Path j of a Monte Carlo run uses stream_id j,
// so the draws never depend on how paths are spread over workers.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    std::mt19937_64 engine() const;
};

// Brownian motion at the nodes of [0,1], b(0) = 0.
SampledPath bm_path(const TimeGrid& grid, const RngStream& rng);

// w(t) = (b(t) - b(t-p)) / sqrt(p) on the window nodes.
SampledPath slepian_from_bm(const SampledPath& b);

// Covariance (1 - (t-s)/p)^+ of the p-Slepian process, p <= s <= t <= 1.
double slepian_cov(double s, double t, double p);

// Exact sample from N(0, Sigma) at the window nodes.
SampledPath exact_gaussian_slepian(const SlepianCovariance& cov, const RngStream& rng);
SampledPath exact_gaussian_slepian(const TimeGrid& grid, const RngStream& rng);

enum class SamplerKind { Diff, Exact };

// Window-path sampler for Monte Carlo loops. Holds the covariance factor when
// sampling exactly so it is built once per run.
class SlepianSampler {
public:
    SlepianSampler(const TimeGrid& grid, SamplerKind kind);

    const TimeGrid& grid() const { return grid_; }
    SamplerKind kind() const { return kind_; }

    // out.size() must equal grid.window_nodes()
    void sample_into(const RngStream& rng, std::span<double> out) const;
    SampledPath sample(const RngStream& rng) const;

private:
    TimeGrid grid_;
    SamplerKind kind_;
    std::shared_ptr<const SlepianCovariance> cov_;
};

// Unit-lag Slepian path x(u) = B(u) - B(u-1) on [1,b], sampled at u_i = i/k,
// i = k..m with b = m/k.
struct UnitLagPath {
    int k = 0;
    int m = 0;
    std::vector<double> values;

    double b() const { return static_cast<double>(m) / k; }
};

// Simulates x on [1, 1/p] with the spacing of `grid` scaled by 1/p.
UnitLagPath unit_slepian_path(const TimeGrid& grid, const RngStream& rng);

// y(u/b) = x(u): a p-Slepian path on [p,1] with p = 1/b. Requires b in (1,2].
SampledPath scale_slepian(const UnitLagPath& x);

} // namespace pslepian
