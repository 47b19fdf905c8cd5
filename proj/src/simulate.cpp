#include "pslepian/simulate.hpp"

#include "pslepian/error.hpp"

#include <cmath>
#include <string>

namespace pslepian {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t phase) {
    return splitmix64(seed ^ splitmix64(phase + 0x5851f42d4c957f2dULL));
}

std::mt19937_64 RngStream::engine() const {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ stream_id));
}

SampledPath bm_path(const TimeGrid& grid, const RngStream& rng) {
    auto eng = rng.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(grid.step());
    std::vector<double> v(static_cast<std::size_t>(grid.cells()) + 1, 0.0);
    for (int i = 1; i <= grid.cells(); ++i) v[i] = v[i - 1] + sd * normal(eng);
    return SampledPath(grid, Support::Full, std::move(v));
}

SampledPath slepian_from_bm(const SampledPath& b) {
    require(b.support == Support::Full, "slepian_from_bm: Brownian path must live on [0,1]");
    SampledPath w = nabla_p(b);
    const double scale = 1.0 / std::sqrt(b.grid.p());
    for (double& x : w.values) x *= scale;
    return w;
}

double slepian_cov(double s, double t, double p) {
    require(p >= 0.5 && p < 1.0, "slepian_cov: p outside [1/2, 1)");
    constexpr double eps = 1e-12;
    require(s >= p - eps && t <= 1.0 + eps, "slepian_cov: times must lie in [p, 1]");
    require(s <= t + eps, "slepian_cov: need s <= t");
    return std::max(0.0, 1.0 - (t - s) / p);
}

SampledPath exact_gaussian_slepian(const SlepianCovariance& cov, const RngStream& rng) {
    auto eng = rng.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> xi(static_cast<std::size_t>(cov.size()));
    for (double& x : xi) x = normal(eng);
    std::vector<double> out(xi.size());
    cov.correlate(xi, out);
    return SampledPath(cov.grid(), Support::Window, std::move(out));
}

SampledPath exact_gaussian_slepian(const TimeGrid& grid, const RngStream& rng) {
    return exact_gaussian_slepian(SlepianCovariance(grid), rng);
}

SlepianSampler::SlepianSampler(const TimeGrid& grid, SamplerKind kind) : grid_(grid), kind_(kind) {
    if (kind_ == SamplerKind::Exact) cov_ = std::make_shared<const SlepianCovariance>(grid_);
}

void SlepianSampler::sample_into(const RngStream& rng, std::span<double> out) const {
    require(static_cast<int>(out.size()) == grid_.window_nodes(), "sampler: output span has the wrong length");
    auto eng = rng.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    if (kind_ == SamplerKind::Exact) {
        thread_local std::vector<double> xi;
        xi.resize(out.size());
        for (double& x : xi) x = normal(eng);
        cov_->correlate(xi, out);
        return;
    }
    // Differenced Brownian motion, same draws as bm_path + slepian_from_bm.
    const int m = grid_.cells();
    const int k = grid_.lag_cells();
    thread_local std::vector<double> b;
    b.assign(static_cast<std::size_t>(m) + 1, 0.0);
    const double sd = std::sqrt(grid_.step());
    for (int i = 1; i <= m; ++i) b[i] = b[i - 1] + sd * normal(eng);
    const double scale = 1.0 / std::sqrt(grid_.p());
    for (int i = k; i <= m; ++i) out[i - k] = (b[i] - b[i - k]) * scale;
}

SampledPath SlepianSampler::sample(const RngStream& rng) const {
    std::vector<double> v(static_cast<std::size_t>(grid_.window_nodes()));
    sample_into(rng, v);
    return SampledPath(grid_, Support::Window, std::move(v));
}

UnitLagPath unit_slepian_path(const TimeGrid& grid, const RngStream& rng) {
    // B on [0, b] with step 1/k; b = m/k.
    const int m = grid.cells();
    const int k = grid.lag_cells();
    auto eng = rng.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(1.0 / k);
    std::vector<double> bm(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 1; i <= m; ++i) bm[i] = bm[i - 1] + sd * normal(eng);
    UnitLagPath x{k, m, {}};
    x.values.reserve(static_cast<std::size_t>(m - k + 1));
    for (int i = k; i <= m; ++i) x.values.push_back(bm[i] - bm[i - k]);
    return x;
}

SampledPath scale_slepian(const UnitLagPath& x) {
    require(x.k > 0 && x.m > x.k && x.m <= 2 * x.k,
            "scale_slepian: b = m/k must lie in (1, 2], got m=" + std::to_string(x.m) + " k=" + std::to_string(x.k));
    require(static_cast<int>(x.values.size()) == x.m - x.k + 1, "scale_slepian: expected one value per node u = i/k");
    // u = i/k maps to t = i/m
    const TimeGrid out_grid = TimeGrid::make(x.m, static_cast<double>(x.k) / x.m);
    return SampledPath(out_grid, Support::Window, x.values);
}

} // namespace pslepian
