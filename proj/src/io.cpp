#include "pslepian/io.hpp"

#include "pslepian/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace pslepian {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw PreconditionError("csv line " + std::to_string(line_no) + ": '" + s + "' is not a number");
    return v;
}

void write_number(std::ostream& out, double v) { out << std::setprecision(17) << v; }

void check_abscissa(double got, double want, std::size_t row) {
    if (std::abs(got - want) > 1e-9)
        throw PreconditionError("csv row " + std::to_string(row + 1) + ": time " + std::to_string(got) +
                                " does not match grid point " + std::to_string(want));
}

} // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cells = split(t);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw PreconditionError("csv line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(table.header.size()) + " columns, got " +
                                    std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c, line_no));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw PreconditionError("csv: missing header row");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_csv(in);
}

void write_paths_csv(std::ostream& out, const TimeGrid& grid, Support support,
                     const std::vector<std::vector<double>>& paths, const std::string& comment) {
    const std::size_t nodes = node_count(grid, support);
    for (const auto& p : paths) require(p.size() == nodes, "write_paths_csv: path length does not match the grid");
    if (!comment.empty()) out << "# " << comment << '\n';
    out << 't';
    if (paths.size() == 1) {
        out << ",value";
    } else {
        for (std::size_t j = 0; j < paths.size(); ++j) out << ",value_" << j;
    }
    out << '\n';
    const int first = support == Support::Full ? 0 : grid.lag_cells();
    for (std::size_t i = 0; i < nodes; ++i) {
        write_number(out, grid.node(first + static_cast<int>(i)));
        for (const auto& p : paths) {
            out << ',';
            write_number(out, p[i]);
        }
        out << '\n';
    }
}

void write_function_csv(std::ostream& out, const SampledFunction& f, const std::string& comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "t_left,value\n";
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        write_number(out, f.grid.node(f.first_cell() + static_cast<int>(j)));
        out << ',';
        write_number(out, f.values[j]);
        out << '\n';
    }
}

SampledPath path_from_csv(const CsvTable& table, const TimeGrid& grid, Support support, std::size_t column) {
    require(column < table.header.size(), "csv: requested column " + std::to_string(column) + " does not exist");
    const std::size_t nodes = node_count(grid, support);
    require(table.rows.size() == nodes, "csv: expected " + std::to_string(nodes) + " node rows, got " +
                                            std::to_string(table.rows.size()));
    const int first = support == Support::Full ? 0 : grid.lag_cells();
    std::vector<double> v(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        check_abscissa(table.rows[i][0], grid.node(first + static_cast<int>(i)), i);
        v[i] = table.rows[i][column];
    }
    return SampledPath(grid, support, std::move(v));
}

SampledFunction function_from_csv(const CsvTable& table, const TimeGrid& grid, Support support,
                                  std::size_t column) {
    require(column < table.header.size(), "csv: requested column " + std::to_string(column) + " does not exist");
    const std::size_t cells = cell_count(grid, support);
    require(table.rows.size() == cells, "csv: expected " + std::to_string(cells) + " cell rows, got " +
                                            std::to_string(table.rows.size()));
    const int first = support == Support::Full ? 0 : grid.lag_cells();
    std::vector<double> v(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        check_abscissa(table.rows[j][0], grid.node(first + static_cast<int>(j)), j);
        v[j] = table.rows[j][column];
    }
    return SampledFunction(grid, support, std::move(v));
}

} // namespace pslepian
