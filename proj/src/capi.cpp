#include "pslepian/pslepian.h"

#include "pslepian/apps.hpp"
#include "pslepian/error.hpp"
#include "pslepian/io.hpp"
#include "pslepian/oracle.hpp"
#include "pslepian/shorthand.hpp"
#include "pslepian/version.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>

struct psl_grid {
    pslepian::TimeGrid grid;
};

struct psl_source {
    pslepian::SourceFunction src;
};

struct psl_shift {
    pslepian::KernelElement h;
};

namespace {

using namespace pslepian;

thread_local std::string g_last_error;

psl_status fail(psl_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// Runs fn, translating exceptions to status codes.
template <class Fn>
psl_status guard(Fn&& fn) {
    try {
        fn();
        return PSL_OK;
    } catch (const PreconditionError& e) {
        return fail(PSL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const NumericalError& e) {
        return fail(PSL_ERR_NUMERICAL, e.what());
    } catch (const IoError& e) {
        return fail(PSL_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(PSL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PSL_ERR_INTERNAL, "unknown error");
    }
}

void need(const void* ptr, const char* what) {
    if (ptr == nullptr) throw PreconditionError(std::string(what) + " must not be NULL");
}

void need_len(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw PreconditionError(std::string(what) + ": expected " + std::to_string(want) + " values, got " +
                                std::to_string(got));
}

Variant variant_of(psl_variant v) {
    if (v == PSL_VARIANT_PAPER) return Variant::Paper;
    if (v == PSL_VARIANT_CORRECTED) return Variant::Corrected;
    throw PreconditionError("unknown variant code");
}

McConfig config_of(const psl_mc_config* cfg) {
    need(cfg, "mc config");
    if (cfg->sampler != PSL_SAMPLER_DIFF && cfg->sampler != PSL_SAMPLER_EXACT)
        throw PreconditionError("unknown sampler code");
    return McConfig{cfg->seed, cfg->n, cfg->workers,
                    cfg->sampler == PSL_SAMPLER_EXACT ? SamplerKind::Exact : SamplerKind::Diff};
}

psl_mc_estimate to_c(const McEstimate& e) { return psl_mc_estimate{e.mean, e.std_error, e.n, e.seed}; }

SampledPath window_path(const TimeGrid& grid, const double* w, std::size_t n) {
    need(w, "path");
    need_len(n, static_cast<std::size_t>(grid.window_nodes()), "window path");
    return SampledPath(grid, Support::Window, std::vector<double>(w, w + n));
}

template <class Fn>
void with_output_file(const char* file, Fn&& fn) {
    need(file, "file name");
    if (std::string(file) == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(file);
    if (!out) throw IoError(std::string("cannot open '") + file + "' for writing");
    fn(out);
    if (!out) throw IoError(std::string("write to '") + file + "' failed");
}

} // namespace

extern "C" {

const char* psl_version(void) { return pslepian::kVersion; }

const char* psl_last_error(void) { return g_last_error.c_str(); }

psl_status psl_grid_create(int m, double p, psl_grid** out) {
    return guard([&] {
        need(out, "out");
        *out = new psl_grid{TimeGrid::make(m, p)};
    });
}

void psl_grid_destroy(psl_grid* grid) { delete grid; }
int psl_grid_cells(const psl_grid* grid) { return grid ? grid->grid.cells() : 0; }
int psl_grid_lag_cells(const psl_grid* grid) { return grid ? grid->grid.lag_cells() : 0; }
double psl_grid_p(const psl_grid* grid) { return grid ? grid->grid.p() : 0.0; }
size_t psl_grid_window_nodes(const psl_grid* grid) {
    return grid ? static_cast<size_t>(grid->grid.window_nodes()) : 0;
}

psl_status psl_source_create(const psl_grid* grid, const double* cells, size_t n, psl_source** out) {
    return guard([&] {
        need(grid, "grid");
        need(cells, "cells");
        need(out, "out");
        *out = new psl_source{
            SourceFunction(SampledFunction(grid->grid, Support::Full, std::vector<double>(cells, cells + n)))};
    });
}

psl_status psl_source_parse(const psl_grid* grid, const char* text, psl_source** out) {
    return guard([&] {
        need(grid, "grid");
        need(text, "text");
        need(out, "out");
        *out = new psl_source{parse_source(text, grid->grid)};
    });
}

void psl_source_destroy(psl_source* src) { delete src; }

psl_status psl_source_scalars(const psl_source* src, double* sfp, double* delta) {
    return guard([&] {
        need(src, "source");
        if (sfp) *sfp = src->src.sfp();
        if (delta) *delta = src->src.delta();
    });
}

psl_status psl_source_norm_sq(const psl_source* src, psl_variant variant, double* out) {
    return guard([&] {
        need(src, "source");
        need(out, "out");
        *out = norm_sq(src->src, variant_of(variant));
    });
}

psl_status psl_source_fstar(const psl_source* src, double* out_cells, size_t n) {
    return guard([&] {
        need(src, "source");
        need(out_cells, "out");
        need_len(n, static_cast<std::size_t>(src->src.grid().cells()), "f* buffer");
        const SampledFunction f = minimizer_fstar(src->src);
        std::copy(f.values.begin(), f.values.end(), out_cells);
    });
}

psl_status psl_source_qp(const psl_source* src, psl_qp_method method, double* out_cells, size_t n, double* value,
                         double* residual) {
    return guard([&] {
        need(src, "source");
        const QpResult r = qp_min_norm(src->src, method == PSL_QP_KKT ? QpMethod::Kkt : QpMethod::Eliminate);
        if (out_cells) {
            need_len(n, r.g_star.values.size(), "qp buffer");
            std::copy(r.g_star.values.begin(), r.g_star.values.end(), out_cells);
        }
        if (value) *value = r.value;
        if (residual) *residual = r.residual;
    });
}

psl_status psl_source_feasibility(const psl_source* src, const double* g_cells, size_t n, double* residual) {
    return guard([&] {
        need(src, "source");
        need(g_cells, "g");
        need(residual, "out");
        *residual = feasibility_residual(
            SampledFunction(src->src.grid(), Support::Full, std::vector<double>(g_cells, g_cells + n)), src->src);
    });
}

psl_status psl_source_to_shift(const psl_source* src, psl_shift** out) {
    return guard([&] {
        need(src, "source");
        need(out, "out");
        *out = new psl_shift{kernel_from_source(src->src)};
    });
}

psl_status psl_shift_create(const psl_grid* grid, double c, const double* g_cells, size_t n, psl_shift** out) {
    return guard([&] {
        need(grid, "grid");
        need(out, "out");
        if (g_cells == nullptr) {
            *out = new psl_shift{KernelElement::constant(grid->grid, c)};
            return;
        }
        *out = new psl_shift{
            KernelElement(c, SampledFunction(grid->grid, Support::Window, std::vector<double>(g_cells, g_cells + n)))};
    });
}

psl_status psl_shift_from_nodes(const psl_grid* grid, const double* h_nodes, size_t n, psl_shift** out) {
    return guard([&] {
        need(grid, "grid");
        need(out, "out");
        *out = new psl_shift{kernel_from_samples(window_path(grid->grid, h_nodes, n))};
    });
}

psl_status psl_shift_parse(const psl_grid* grid, const char* text, psl_shift** out) {
    return guard([&] {
        need(grid, "grid");
        need(text, "text");
        need(out, "out");
        *out = new psl_shift{parse_shift(text, grid->grid)};
    });
}

void psl_shift_destroy(psl_shift* shift) { delete shift; }

psl_status psl_shift_coordinates(const psl_shift* shift, double* c, double* sg) {
    return guard([&] {
        need(shift, "shift");
        if (c) *c = shift->h.c;
        if (sg) *sg = shift->h.sg();
    });
}

psl_status psl_shift_nodes(const psl_shift* shift, double* out, size_t n) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        const auto v = shift->h.node_values();
        need_len(n, v.size(), "shift buffer");
        std::copy(v.begin(), v.end(), out);
    });
}

psl_status psl_shift_norm_sq(const psl_shift* shift, psl_variant variant, double* out) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        *out = norm_sq(shift->h, variant_of(variant));
    });
}

psl_status psl_shift_fd_norm_sq(const psl_shift* shift, double* out) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        *out = fd_norm_sq(shift->h);
    });
}

psl_status psl_z_eval(const psl_shift* shift, const double* w, size_t n, psl_variant variant, double* out) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        *out = z_eval(shift->h, window_path(shift->h.grid(), w, n), variant_of(variant));
    });
}

psl_status psl_log_density(const psl_shift* shift, const double* w, size_t n, psl_variant variant,
                           psl_log_density_result* out) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        const LogDensityResult r = log_density(shift->h, window_path(shift->h.grid(), w, n), variant_of(variant));
        *out = psl_log_density_result{r.quadratic, r.linear, r.log_density, variant};
    });
}

psl_status psl_fd_log_lr(const psl_shift* shift, const double* w, size_t n, double* out) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        const SlepianCovariance cov(shift->h.grid());
        *out = fd_log_lr(shift->h, window_path(shift->h.grid(), w, n), cov);
    });
}

psl_status psl_simulate(const psl_grid* grid, const psl_mc_config* cfg, double* out, size_t n_values) {
    return guard([&] {
        need(grid, "grid");
        need(out, "out");
        const McConfig mc = config_of(cfg);
        const std::size_t nodes = static_cast<std::size_t>(grid->grid.window_nodes());
        need_len(n_values, nodes * mc.n, "simulate buffer");
        const SlepianSampler sampler(grid->grid, mc.sampler);
        struct Nothing {
            void merge(const Nothing&) {}
        };
        map_reduce_paths(mc.n, mc.workers, Nothing{}, [&](Nothing&, std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j)
                sampler.sample_into(RngStream{mc.seed, j}, std::span<double>(out + j * nodes, nodes));
        });
    });
}

psl_status psl_simulate_unit_slepian(const psl_grid* grid, uint64_t seed, uint64_t stream, double* out, size_t n) {
    return guard([&] {
        need(grid, "grid");
        need(out, "out");
        const UnitLagPath x = unit_slepian_path(grid->grid, RngStream{seed, stream});
        need_len(n, x.values.size(), "unit slepian buffer");
        std::copy(x.values.begin(), x.values.end(), out);
    });
}

psl_status psl_scale_slepian(int k, int m, const double* x, size_t n, double* out) {
    return guard([&] {
        need(x, "x");
        need(out, "out");
        const SampledPath y = scale_slepian(UnitLagPath{k, m, std::vector<double>(x, x + n)});
        std::copy(y.values.begin(), y.values.end(), out);
    });
}

double psl_slepian_cov(double s, double t, double p) {
    double out = 0.0;
    const psl_status st = guard([&] { out = slepian_cov(s, t, p); });
    return st == PSL_OK ? out : std::numeric_limits<double>::quiet_NaN();
}

psl_status psl_mc_expectation(const psl_grid* grid, psl_path_functional fn, void* user, const psl_mc_config* cfg,
                              psl_mc_estimate* out) {
    return guard([&] {
        need(grid, "grid");
        need(reinterpret_cast<const void*>(fn), "functional");
        need(out, "out");
        *out = to_c(mc_expectation(
            grid->grid, [&](std::span<const double> w) { return fn(w.data(), w.size(), user); }, config_of(cfg)));
    });
}

psl_status psl_verify_condition_a(const psl_shift* shift, psl_variant variant, const psl_mc_config* cfg,
                                  psl_condition_a_summary* summary, psl_mc_estimate* per_node, size_t cap) {
    return guard([&] {
        need(shift, "shift");
        need(summary, "summary");
        const ConditionAReport r = condition_a_residual(shift->h, variant_of(variant), config_of(cfg));
        *summary = psl_condition_a_summary{r.max_abs, r.se_at_max, r.max_se, r.mean_offset, r.argmax};
        if (per_node) {
            if (cap < r.residuals.size()) throw PreconditionError("condition A: per-node buffer too small");
            for (std::size_t i = 0; i < r.residuals.size(); ++i) per_node[i] = to_c(r.residuals[i]);
        }
    });
}

psl_status psl_verify_isometry(const psl_shift* shift, psl_variant variant, const psl_mc_config* cfg,
                               psl_mc_estimate* second_moment, double* target) {
    return guard([&] {
        need(shift, "shift");
        need(second_moment, "out");
        const IsometryReport r = isometry_check(shift->h, variant_of(variant), config_of(cfg));
        *second_moment = to_c(r.second_moment);
        if (target) *target = r.target;
    });
}

psl_status psl_verify_density_norm(const psl_shift* shift, psl_variant variant, const psl_mc_config* cfg,
                                   psl_mc_estimate* out) {
    return guard([&] {
        need(shift, "shift");
        need(out, "out");
        *out = to_c(density_normalization(shift->h, variant_of(variant), config_of(cfg)));
    });
}

psl_status psl_change_of_measure(const psl_shift* shift, psl_functional fn, double level, const psl_mc_config* cfg,
                                 psl_mc_estimate* direct, psl_mc_estimate* reweighted) {
    return guard([&] {
        need(shift, "shift");
        need(direct, "direct");
        need(reweighted, "reweighted");
        PathFunctional phi;
        switch (fn) {
        case PSL_FUNC_ENDPOINT:
            phi = [](std::span<const double> w) { return w.back(); };
            break;
        case PSL_FUNC_NODE_MAX:
            phi = [](std::span<const double> w) { return *std::max_element(w.begin(), w.end()); };
            break;
        case PSL_FUNC_CROSSING:
            phi = [level](std::span<const double> w) {
                return *std::max_element(w.begin(), w.end()) >= level ? 1.0 : 0.0;
            };
            break;
        default:
            throw PreconditionError("unknown functional code");
        }
        const ChangeOfMeasure r = change_of_measure(shift->h, phi, config_of(cfg));
        *direct = to_c(r.direct);
        *reweighted = to_c(r.reweighted);
    });
}

psl_status psl_cross_plain(const psl_grid* grid, double u, const psl_mc_config* cfg, psl_mc_estimate* out,
                           int* rare_event) {
    return guard([&] {
        need(grid, "grid");
        need(out, "out");
        const CrossingEstimate e = crossing_prob_plain(CrossingSpec{grid->grid, u, std::nullopt, config_of(cfg)});
        *out = to_c(e.estimate);
        if (rare_event) *rare_event = e.rare_event ? 1 : 0;
    });
}

psl_status psl_cross_is(const psl_shift* tilt, double u, const psl_mc_config* cfg, psl_mc_estimate* out,
                        int* rare_event) {
    return guard([&] {
        need(tilt, "tilt");
        need(out, "out");
        const CrossingEstimate e = crossing_prob_is(CrossingSpec{tilt->h.grid(), u, tilt->h, config_of(cfg)});
        *out = to_c(e.estimate);
        if (rare_event) *rare_event = e.rare_event ? 1 : 0;
    });
}

psl_status psl_power(const psl_shift* shift, psl_statistic stat, double alpha, const psl_mc_config* cfg, int methods,
                     double* critical, psl_mc_estimate* direct, psl_mc_estimate* reweighted) {
    return guard([&] {
        need(shift, "shift");
        if (stat != PSL_STAT_SUPNORM && stat != PSL_STAT_ENDPOINT) throw PreconditionError("unknown statistic code");
        const bool want_direct = (methods & PSL_POWER_DIRECT) != 0;
        const bool want_rw = (methods & PSL_POWER_REWEIGHTED) != 0;
        if (!want_direct && !want_rw) throw PreconditionError("power: no method selected");
        if (want_direct) need(direct, "direct");
        if (want_rw) need(reweighted, "reweighted");
        const PowerReport r =
            power_under_shift(shift->h, stat == PSL_STAT_SUPNORM ? TestStatistic::SupNorm : TestStatistic::Endpoint,
                              alpha, config_of(cfg), want_direct, want_rw);
        if (critical) *critical = r.critical_value;
        if (want_direct) *direct = to_c(*r.direct);
        if (want_rw) *reweighted = to_c(*r.reweighted);
    });
}

psl_status psl_write_paths_csv(const char* file, const psl_grid* grid, int window, const double* values,
                               size_t n_paths, const char* comment) {
    return guard([&] {
        need(grid, "grid");
        need(values, "values");
        const Support s = window ? Support::Window : Support::Full;
        const std::size_t nodes = node_count(grid->grid, s);
        std::vector<std::vector<double>> paths(n_paths);
        for (std::size_t j = 0; j < n_paths; ++j) paths[j].assign(values + j * nodes, values + (j + 1) * nodes);
        with_output_file(file, [&](std::ostream& out) {
            write_paths_csv(out, grid->grid, s, paths, comment ? comment : "");
        });
    });
}

psl_status psl_write_function_csv(const char* file, const psl_grid* grid, const double* cells, size_t n,
                                  const char* comment) {
    return guard([&] {
        need(grid, "grid");
        need(cells, "cells");
        const SampledFunction f(grid->grid, Support::Full, std::vector<double>(cells, cells + n));
        with_output_file(file, [&](std::ostream& out) { write_function_csv(out, f, comment ? comment : ""); });
    });
}

psl_status psl_read_path_csv(const char* file, const psl_grid* grid, int window, double* out, size_t n) {
    return guard([&] {
        need(file, "file name");
        need(grid, "grid");
        need(out, "out");
        const Support s = window ? Support::Window : Support::Full;
        const SampledPath path = path_from_csv(read_csv_file(file), grid->grid, s);
        need_len(n, path.values.size(), "path buffer");
        std::copy(path.values.begin(), path.values.end(), out);
    });
}

psl_status psl_read_unit_lag_csv(const char* file, const psl_grid* grid, double* out, size_t n) {
    return guard([&] {
        need(file, "file name");
        need(grid, "grid");
        need(out, "out");
        const CsvTable table = read_csv_file(file);
        const int k = grid->grid.lag_cells();
        const int m = grid->grid.cells();
        need_len(n, static_cast<std::size_t>(m - k + 1), "unit-lag buffer");
        if (table.header.size() < 2) throw PreconditionError("unit-lag csv needs columns u,value");
        if (table.rows.size() != n)
            throw PreconditionError("unit-lag csv: expected " + std::to_string(n) + " rows, got " +
                                    std::to_string(table.rows.size()));
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(k + static_cast<int>(i)) / k;
            if (std::abs(table.rows[i][0] - u) > 1e-9)
                throw PreconditionError("unit-lag csv row " + std::to_string(i + 1) + ": u does not equal " +
                                        std::to_string(u));
            out[i] = table.rows[i][1];
        }
    });
}

psl_status psl_write_unit_lag_csv(const char* file, const psl_grid* grid, const double* values, size_t n,
                                  const char* comment) {
    return guard([&] {
        need(grid, "grid");
        need(values, "values");
        const int k = grid->grid.lag_cells();
        need_len(n, static_cast<std::size_t>(grid->grid.window_nodes()), "unit-lag path");
        with_output_file(file, [&](std::ostream& out) {
            if (comment && *comment) out << "# " << comment << '\n';
            out << "u,value\n" << std::setprecision(17);
            for (std::size_t i = 0; i < n; ++i)
                out << static_cast<double>(k + static_cast<int>(i)) / k << ',' << values[i] << '\n';
        });
    });
}

} // extern "C"
