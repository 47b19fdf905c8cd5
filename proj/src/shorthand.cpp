#include "pslepian/shorthand.hpp"

#include "pslepian/error.hpp"
#include "pslepian/io.hpp"
#include "pslepian/simulate.hpp"

#include <charconv>
#include <optional>
#include <cmath>
#include <random>

namespace pslepian {

namespace {

double to_double(std::string_view s, const std::string& whole) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
        throw PreconditionError("cannot parse number in '" + whole + "'");
    return v;
}

// returns the payload after "prefix:" or nullopt
std::optional<std::string_view> after(std::string_view text, std::string_view prefix) {
    if (text.size() > prefix.size() && text.substr(0, prefix.size()) == prefix && text[prefix.size()] == ':')
        return text.substr(prefix.size() + 1);
    return std::nullopt;
}

} // namespace

KernelElement parse_shift(const std::string& text, const TimeGrid& grid) {
    if (auto v = after(text, "const")) return KernelElement::constant(grid, to_double(*v, text));
    if (auto v = after(text, "c")) return KernelElement::constant(grid, to_double(*v, text));
    if (auto v = after(text, "linear")) return KernelElement::linear(grid, to_double(*v, text));
    if (auto v = after(text, "mixed")) {
        const auto comma = v->find(',');
        require(comma != std::string_view::npos, "mixed shift needs 'mixed:<c>,<slope>'");
        const double c = to_double(v->substr(0, comma), text);
        const double slope = to_double(v->substr(comma + 1), text);
        KernelElement h = KernelElement::linear(grid, slope);
        return KernelElement(c, h.g);
    }
    return kernel_from_samples(path_from_csv(read_csv_file(text), grid, Support::Window));
}

SampledFunction random_function(const TimeGrid& grid, std::uint64_t seed) {
    auto eng = RngStream{seed, 0}.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(grid.cells()));
    for (double& x : v) x = normal(eng);
    return SampledFunction(grid, Support::Full, std::move(v));
}

SourceFunction parse_source(const std::string& text, const TimeGrid& grid) {
    const std::size_t m = static_cast<std::size_t>(grid.cells());
    if (auto v = after(text, "const"))
        return SourceFunction(SampledFunction(grid, Support::Full, std::vector<double>(m, to_double(*v, text))));
    if (auto v = after(text, "linear")) {
        const double slope = to_double(*v, text);
        std::vector<double> cells(m);
        for (std::size_t j = 0; j < m; ++j) cells[j] = slope * (static_cast<double>(j) + 0.5) * grid.step();
        return SourceFunction(SampledFunction(grid, Support::Full, std::move(cells)));
    }
    if (auto v = after(text, "random")) {
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), seed);
        require(ec == std::errc{} && ptr == v->data() + v->size(), "cannot parse seed in '" + text + "'");
        return SourceFunction(random_function(grid, seed));
    }
    return SourceFunction(function_from_csv(read_csv_file(text), grid, Support::Full));
}

} // namespace pslepian
