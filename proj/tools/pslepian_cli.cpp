// Command-line front end. Talks to the library only through pslepian.h.

#include "pslepian/pslepian.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

// Carries a psl_status out of the command body.
struct ApiError : std::runtime_error {
    ApiError(psl_status s, const std::string& what) : std::runtime_error(what), status(s) {}
    psl_status status;
};

// Precondition failure detected in the CLI itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(psl_status s) {
    if (s != PSL_OK) throw ApiError(s, psl_last_error());
}

struct GridDeleter {
    void operator()(psl_grid* g) const { psl_grid_destroy(g); }
};
struct SourceDeleter {
    void operator()(psl_source* s) const { psl_source_destroy(s); }
};
struct ShiftDeleter {
    void operator()(psl_shift* s) const { psl_shift_destroy(s); }
};
using GridPtr = std::unique_ptr<psl_grid, GridDeleter>;
using SourcePtr = std::unique_ptr<psl_source, SourceDeleter>;
using ShiftPtr = std::unique_ptr<psl_shift, ShiftDeleter>;

GridPtr make_grid(int m, double p) {
    psl_grid* g = nullptr;
    check(psl_grid_create(m, p, &g));
    return GridPtr(g);
}

SourcePtr make_source(const psl_grid* g, const std::string& text) {
    psl_source* s = nullptr;
    check(psl_source_parse(g, text.c_str(), &s));
    return SourcePtr(s);
}

ShiftPtr make_shift(const psl_grid* g, const std::string& text) {
    psl_shift* s = nullptr;
    check(psl_shift_parse(g, text.c_str(), &s));
    return ShiftPtr(s);
}

ShiftPtr shift_of(const psl_source* src) {
    psl_shift* s = nullptr;
    check(psl_source_to_shift(src, &s));
    return ShiftPtr(s);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PSLEPIAN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("PSLEPIAN_SEED is not an unsigned integer");
        }
    }
    return 1;
}

// Flags shared by every subcommand.
struct Common {
    int m = 0;
    double p = 0.5;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string sampler = "diff";
};

void add_grid(CLI::App* sub, Common& c) {
    sub->add_option("--m", c.m, "number of grid cells on [0,1]")->required();
    sub->add_option("--p", c.p, "window lag p in [1/2, 1), p*m integral")->required();
}

void add_mc(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "random seed (default: $PSLEPIAN_SEED or 1)");
    sub->add_option("--workers", c.workers, "worker threads; results do not depend on this")
        ->check(CLI::PositiveNumber);
    sub->add_option("--sampler", c.sampler, "path sampler")->check(CLI::IsMember({"diff", "exact"}));
}

psl_mc_config mc_config(const Common& c, std::size_t n) {
    return psl_mc_config{c.seed, n, c.workers, c.sampler == "exact" ? PSL_SAMPLER_EXACT : PSL_SAMPLER_DIFF};
}

psl_variant variant_code(const std::string& v) { return v == "paper" ? PSL_VARIANT_PAPER : PSL_VARIANT_CORRECTED; }

std::vector<std::string> variants_of(const std::string& v) {
    if (v == "both") return {"paper", "corrected"};
    return {v};
}

json header(const std::string& command, const Common& c, json config) {
    json j;
    j["command"] = command;
    j["version"] = psl_version();
    j["grid"] = {{"m", c.m}, {"p", c.p}};
    j["seed"] = c.seed;
    j["config"] = std::move(config);
    return j;
}

json estimate_json(const psl_mc_estimate& e) {
    return {{"value", e.mean}, {"se", e.std_error}, {"n", e.n}};
}

std::string describe(const std::string& command, const Common& c, const std::string& extra) {
    std::ostringstream os;
    os << "pslepian " << psl_version() << ' ' << command << " m=" << c.m << " p=" << c.p << " seed=" << c.seed
       << extra;
    return os.str();
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::size_t n_paths = 1;
    std::string out = "-";
};

void run_simulate(const Common& c, const SimulateArgs& a) {
    const GridPtr g = make_grid(c.m, c.p);
    const std::size_t nodes = psl_grid_window_nodes(g.get());
    std::vector<double> paths(nodes * a.n_paths);
    const psl_mc_config cfg = mc_config(c, a.n_paths);
    check(psl_simulate(g.get(), &cfg, paths.data(), paths.size()));
    const std::string comment =
        describe("simulate", c, " n-paths=" + std::to_string(a.n_paths) + " sampler=" + c.sampler);
    check(psl_write_paths_csv(a.out.c_str(), g.get(), 1, paths.data(), a.n_paths, comment.c_str()));
}

// -------------------------------------------------------------------- norm

struct ShiftArgs {
    std::string shift;
    std::string source;
    std::string variant = "corrected";
};

void run_norm(const Common& c, const ShiftArgs& a, bool with_fd) {
    if (a.shift.empty() == a.source.empty()) throw UsageError("norm: give exactly one of --shift or --source");
    const GridPtr g = make_grid(c.m, c.p);
    SourcePtr src;
    ShiftPtr h;
    if (!a.source.empty()) {
        src = make_source(g.get(), a.source);
        h = shift_of(src.get());
    } else {
        h = make_shift(g.get(), a.shift);
    }
    json j = header("norm", c, {{"variant", a.variant}, {"shift", a.shift}, {"source", a.source}});
    j["variant"] = a.variant;
    for (const auto& v : variants_of(a.variant)) {
        double value = 0.0;
        if (src)
            check(psl_source_norm_sq(src.get(), variant_code(v), &value));
        else
            check(psl_shift_norm_sq(h.get(), variant_code(v), &value));
        j[v] = value;
    }
    if (a.variant != "both") j["value"] = j[a.variant];
    if (src) {
        double qp = 0.0;
        double residual = 0.0;
        check(psl_source_qp(src.get(), PSL_QP_ELIMINATE, nullptr, 0, &qp, &residual));
        j["qp"] = {{"value", qp}, {"residual", residual}};
    }
    if (with_fd) {
        double fd = 0.0;
        check(psl_shift_fd_norm_sq(h.get(), &fd));
        j["fd_norm_sq"] = fd;
    }
    emit(j);
}

// ------------------------------------------------------------------- fstar

void run_fstar(const Common& c, const std::string& source, const std::string& out) {
    const GridPtr g = make_grid(c.m, c.p);
    const SourcePtr src = make_source(g.get(), source);
    const std::size_t cells = static_cast<std::size_t>(psl_grid_cells(g.get()));
    std::vector<double> fstar(cells);
    check(psl_source_fstar(src.get(), fstar.data(), cells));
    double residual = 0.0;
    check(psl_source_feasibility(src.get(), fstar.data(), cells, &residual));
    double closed = 0.0;
    check(psl_source_norm_sq(src.get(), PSL_VARIANT_CORRECTED, &closed));
    double qp = 0.0;
    double qp_residual = 0.0;
    check(psl_source_qp(src.get(), PSL_QP_ELIMINATE, nullptr, 0, &qp, &qp_residual));
    double fstar_sq = 0.0;
    for (double x : fstar) fstar_sq += x * x;
    fstar_sq /= static_cast<double>(cells);

    if (!out.empty()) {
        const std::string comment = describe("fstar", c, " source=" + source);
        check(psl_write_function_csv(out.c_str(), g.get(), fstar.data(), cells, comment.c_str()));
    }
    json j = header("fstar", c, {{"source", source}, {"out", out}});
    j["fstar_norm_sq"] = fstar_sq;
    j["closed_form"] = closed;
    j["qp"] = {{"value", qp}, {"residual", qp_residual}};
    j["feasibility_residual"] = residual;
    emit(j);
}

// ----------------------------------------------------------------- density

void run_density(const Common& c, const ShiftArgs& a, const std::string& path, bool with_fd) {
    if (a.shift.empty() == a.source.empty()) throw UsageError("density: give exactly one of --shift or --source");
    const GridPtr g = make_grid(c.m, c.p);
    ShiftPtr h;
    if (!a.source.empty()) {
        const SourcePtr src = make_source(g.get(), a.source);
        h = shift_of(src.get());
    } else {
        h = make_shift(g.get(), a.shift);
    }
    const std::size_t nodes = psl_grid_window_nodes(g.get());
    std::vector<double> w(nodes);
    check(psl_read_path_csv(path.c_str(), g.get(), 1, w.data(), nodes));

    json j = header("density", c, {{"variant", a.variant}, {"shift", a.shift}, {"source", a.source}, {"path", path}});
    j["variant"] = a.variant;
    auto one = [&](const std::string& v) {
        psl_log_density_result r{};
        check(psl_log_density(h.get(), w.data(), nodes, variant_code(v), &r));
        return json{{"quadratic", r.quadratic}, {"linear", r.linear}, {"logDensity", r.log_density}, {"variant", v}};
    };
    if (a.variant == "both") {
        j["paper"] = one("paper");
        j["corrected"] = one("corrected");
    } else {
        const json r = one(a.variant);
        for (auto& [key, val] : r.items()) j[key] = val;
    }
    if (with_fd) {
        double fd = 0.0;
        check(psl_fd_log_lr(h.get(), w.data(), nodes, &fd));
        j["fd_log_lr"] = fd;
    }
    emit(j);
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    std::string check = "condition-a";
    std::size_t n = 100000;
    double tolerance_qp = 1e-6;
};

void run_verify(const Common& c, const ShiftArgs& a, const VerifyArgs& v) {
    if (!a.shift.empty() && !a.source.empty()) throw UsageError("verify: give at most one of --shift or --source");
    if (a.variant == "both") throw UsageError("verify: --variant must be paper or corrected");
    const GridPtr g = make_grid(c.m, c.p);
    const std::string source = a.source.empty() && a.shift.empty() ? "const:1" : a.source;
    SourcePtr src;
    ShiftPtr h;
    if (!source.empty()) {
        src = make_source(g.get(), source);
        h = shift_of(src.get());
    } else {
        h = make_shift(g.get(), a.shift);
    }
    const psl_variant variant = variant_code(a.variant);
    const psl_mc_config cfg = mc_config(c, v.n);

    json j = header("verify", c,
                    {{"check", v.check}, {"variant", a.variant}, {"shift", a.shift}, {"source", source},
                     {"n", v.n}, {"sampler", c.sampler}});
    j["check"] = v.check;
    j["variant"] = a.variant;

    if (v.check == "condition-a") {
        psl_condition_a_summary s{};
        check(psl_verify_condition_a(h.get(), variant, &cfg, &s, nullptr, 0));
        double hc = 0.0;
        check(psl_shift_coordinates(h.get(), &hc, nullptr));
        j["estimate"] = s.max_abs;
        j["se"] = s.se_at_max;
        j["tolerance"] = 3.0 * s.max_se;
        j["pass"] = s.max_abs < 3.0 * s.max_se;
        j["offset"] = s.mean_offset;
        j["offset_if_paper_constants"] = hc / 2.0;
        j["n"] = v.n;
    } else if (v.check == "isometry") {
        psl_mc_estimate e{};
        double target = 0.0;
        check(psl_verify_isometry(h.get(), variant, &cfg, &e, &target));
        j["estimate"] = e.mean;
        j["se"] = e.std_error;
        j["target"] = target;
        j["tolerance"] = 3.0 * e.std_error;
        j["pass"] = std::abs(e.mean - target) < 3.0 * e.std_error;
        j["n"] = e.n;
    } else if (v.check == "density-norm") {
        psl_mc_estimate e{};
        check(psl_verify_density_norm(h.get(), variant, &cfg, &e));
        j["estimate"] = e.mean;
        j["se"] = e.std_error;
        j["target"] = 1.0;
        j["tolerance"] = 3.0 * e.std_error;
        j["pass"] = std::abs(e.mean - 1.0) < 3.0 * e.std_error;
        j["n"] = e.n;
    } else if (v.check == "qp") {
        if (!src) throw UsageError("verify qp needs --source");
        double qp = 0.0;
        double residual = 0.0;
        check(psl_source_qp(src.get(), PSL_QP_ELIMINATE, nullptr, 0, &qp, &residual));
        double closed = 0.0;
        check(psl_source_norm_sq(src.get(), PSL_VARIANT_CORRECTED, &closed));
        const std::size_t cells = static_cast<std::size_t>(psl_grid_cells(g.get()));
        std::vector<double> fstar(cells);
        check(psl_source_fstar(src.get(), fstar.data(), cells));
        double feas = 0.0;
        check(psl_source_feasibility(src.get(), fstar.data(), cells, &feas));
        j["estimate"] = qp;
        j["se"] = 0.0;
        j["target"] = closed;
        j["tolerance"] = v.tolerance_qp;
        j["qp_residual"] = residual;
        j["fstar_feasibility_residual"] = feas;
        j["pass"] = std::abs(qp - closed) <= v.tolerance_qp && feas <= 1e-10 && residual <= 1e-10;
    } else {
        throw UsageError("unknown verify check '" + v.check + "'");
    }
    emit(j);
}

// ------------------------------------------------------------------- cross

struct CrossArgs {
    double u = 1.0;
    std::size_t n = 100000;
    std::string tilt;
};

void run_cross(const Common& c, const CrossArgs& a) {
    const GridPtr g = make_grid(c.m, c.p);
    const psl_mc_config cfg = mc_config(c, a.n);
    json j = header("cross", c, {{"u", a.u}, {"n", a.n}, {"tilt", a.tilt}, {"sampler", c.sampler}});
    psl_mc_estimate plain{};
    int rare = 0;
    check(psl_cross_plain(g.get(), a.u, &cfg, &plain, &rare));
    j["plain"] = estimate_json(plain);
    j["plain"]["rare_event"] = rare != 0;
    if (rare) j["warnings"].push_back("plain estimate is 0 or 1: standard error is degenerate");
    if (!a.tilt.empty()) {
        const ShiftPtr h = make_shift(g.get(), a.tilt);
        psl_mc_estimate is{};
        int rare_is = 0;
        check(psl_cross_is(h.get(), a.u, &cfg, &is, &rare_is));
        j["is"] = estimate_json(is);
        j["is"]["rare_event"] = rare_is != 0;
        const double combined = std::sqrt(plain.std_error * plain.std_error + is.std_error * is.std_error);
        j["agree"] = std::abs(plain.mean - is.mean) <= 3.0 * combined;
    }
    j["note"] = "maximum over grid nodes; biased low against continuous-time crossing";
    emit(j);
}

// ------------------------------------------------------------------- power

struct PowerArgs {
    double alpha = 0.05;
    std::string stat = "supNorm";
    std::string shift;
    std::string method = "both";
    std::size_t n = 100000;
};

void run_power(const Common& c, const PowerArgs& a) {
    const GridPtr g = make_grid(c.m, c.p);
    const ShiftPtr h = make_shift(g.get(), a.shift);
    const psl_mc_config cfg = mc_config(c, a.n);
    int methods = 0;
    if (a.method == "direct" || a.method == "both") methods |= PSL_POWER_DIRECT;
    if (a.method == "reweighted" || a.method == "both") methods |= PSL_POWER_REWEIGHTED;
    double critical = 0.0;
    psl_mc_estimate direct{};
    psl_mc_estimate rw{};
    check(psl_power(h.get(), a.stat == "supNorm" ? PSL_STAT_SUPNORM : PSL_STAT_ENDPOINT, a.alpha, &cfg, methods,
                    &critical, &direct, &rw));
    json j = header("power", c,
                    {{"alpha", a.alpha}, {"stat", a.stat}, {"shift", a.shift}, {"method", a.method}, {"n", a.n},
                     {"sampler", c.sampler}});
    j["critical_value"] = critical;
    if (methods & PSL_POWER_DIRECT) j["direct"] = estimate_json(direct);
    if (methods & PSL_POWER_REWEIGHTED) j["reweighted"] = estimate_json(rw);
    if (methods == (PSL_POWER_DIRECT | PSL_POWER_REWEIGHTED)) {
        const double combined = std::sqrt(direct.std_error * direct.std_error + rw.std_error * rw.std_error);
        j["agree"] = std::abs(direct.mean - rw.mean) <= 3.0 * combined;
    }
    emit(j);
}

// ------------------------------------------------------------------- scale

void run_scale(const Common& c, const std::string& in, const std::string& out, const std::string& x_out) {
    const GridPtr g = make_grid(c.m, c.p);
    const std::size_t nodes = psl_grid_window_nodes(g.get());
    const int k = psl_grid_lag_cells(g.get());
    std::vector<double> x(nodes);
    if (in.empty())
        check(psl_simulate_unit_slepian(g.get(), c.seed, 0, x.data(), nodes));
    else
        check(psl_read_unit_lag_csv(in.c_str(), g.get(), x.data(), nodes));
    if (!x_out.empty()) {
        const std::string comment = describe("scale", c, " unit-lag input");
        check(psl_write_unit_lag_csv(x_out.c_str(), g.get(), x.data(), nodes, comment.c_str()));
    }
    std::vector<double> y(nodes);
    check(psl_scale_slepian(k, c.m, x.data(), nodes, y.data()));
    const std::string comment = describe("scale", c, " b=" + std::to_string(1.0 / c.p) + " in=" + in);
    check(psl_write_paths_csv(out.c_str(), g.get(), 1, y.data(), 1, comment.c_str()));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-Slepian Cameron-Martin toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(psl_version()));

    Common common;
    SimulateArgs sim;
    ShiftArgs shift_args;
    VerifyArgs verify_args;
    CrossArgs cross_args;
    PowerArgs power_args;
    std::string fstar_source;
    std::string fstar_out;
    std::string density_path;
    std::string scale_in;
    std::string scale_out = "-";
    std::string scale_x_out;
    bool with_fd = false;
    const std::vector<std::string> variants = {"paper", "corrected", "both"};

    auto* simulate = app.add_subcommand("simulate", "sample p-Slepian paths on [p,1]");
    add_grid(simulate, common);
    add_mc(simulate, common);
    simulate->add_option("--n-paths", sim.n_paths, "number of paths")->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out, "output CSV ('-' for stdout)");

    auto* norm = app.add_subcommand("norm", "squared kernel norm of a shift");
    add_grid(norm, common);
    norm->add_option("--shift", shift_args.shift, "shift: const:<c> | linear:<s> | mixed:<c>,<s> | file.csv");
    norm->add_option("--source", shift_args.source, "generator f: const:<v> | linear:<s> | random:<seed> | file.csv");
    norm->add_option("--variant", shift_args.variant, "constants")->check(CLI::IsMember(variants));
    norm->add_flag("--fd", with_fd, "also report the finite-dimensional quadratic form");

    auto* fstar = app.add_subcommand("fstar", "minimal-norm generator f*");
    add_grid(fstar, common);
    fstar->add_option("--source", fstar_source, "generator f")->required();
    fstar->add_option("--out", fstar_out, "write f* as CSV");

    auto* density = app.add_subcommand("density", "log Radon-Nikodym density at a path");
    add_grid(density, common);
    density->add_option("--shift", shift_args.shift, "shift");
    density->add_option("--source", shift_args.source, "generator f");
    density->add_option("--variant", shift_args.variant, "constants")->check(CLI::IsMember(variants));
    density->add_option("--path", density_path, "window path CSV (t,value)")->required();
    density->add_flag("--fd", with_fd, "also report the finite-dimensional log likelihood ratio");

    auto* verify = app.add_subcommand("verify", "Monte Carlo and optimization cross-checks");
    add_grid(verify, common);
    add_mc(verify, common);
    verify->add_option("check", verify_args.check, "condition-a | isometry | density-norm | qp")
        ->required()
        ->check(CLI::IsMember({"condition-a", "isometry", "density-norm", "qp"}));
    verify->add_option("--shift", shift_args.shift, "shift");
    verify->add_option("--source", shift_args.source, "generator f (default const:1)");
    verify->add_option("--variant", shift_args.variant, "constants")
        ->check(CLI::IsMember({"paper", "corrected"}));
    verify->add_option("--n", verify_args.n, "Monte Carlo paths")->check(CLI::Range(2, 1 << 30));

    auto* cross = app.add_subcommand("cross", "boundary-crossing probability of max W >= u");
    add_grid(cross, common);
    add_mc(cross, common);
    cross->add_option("--u", cross_args.u, "level")->required();
    cross->add_option("--n", cross_args.n, "Monte Carlo paths")->check(CLI::Range(2, 1 << 30));
    cross->add_option("--tilt", cross_args.tilt, "importance-sampling shift");

    auto* power = app.add_subcommand("power", "power of a window test under a shift");
    add_grid(power, common);
    add_mc(power, common);
    power->add_option("--alpha", power_args.alpha, "level")->check(CLI::Range(0.0, 1.0));
    power->add_option("--stat", power_args.stat, "statistic")->check(CLI::IsMember({"supNorm", "endpoint"}));
    power->add_option("--shift", power_args.shift, "alternative shift")->required();
    power->add_option("--method", power_args.method, "estimator")
        ->check(CLI::IsMember({"direct", "reweighted", "both"}));
    power->add_option("--n", power_args.n, "Monte Carlo paths")->check(CLI::Range(2, 1 << 30));

    auto* scale = app.add_subcommand("scale", "map a unit-lag Slepian path on [1,1/p] to a p-Slepian path");
    add_grid(scale, common);
    scale->add_option("--seed", common.seed, "seed used when --in is absent");
    scale->add_option("--in", scale_in, "unit-lag CSV (u,value) at u = i/k; simulated if absent");
    scale->add_option("--out", scale_out, "output CSV ('-' for stdout)");
    scale->add_option("--x-out", scale_x_out, "also write the unit-lag input path");

    try {
        common.seed = default_seed();
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*simulate) run_simulate(common, sim);
        else if (*norm) run_norm(common, shift_args, with_fd);
        else if (*fstar) run_fstar(common, fstar_source, fstar_out);
        else if (*density) run_density(common, shift_args, density_path, with_fd);
        else if (*verify) run_verify(common, shift_args, verify_args);
        else if (*cross) run_cross(common, cross_args);
        else if (*power) run_power(common, power_args);
        else if (*scale) run_scale(common, scale_in, scale_out, scale_x_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ApiError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.status == PSL_ERR_INVALID_ARGUMENT || e.status == PSL_ERR_IO ? 2 : 1;
    }
    return 0;
}
