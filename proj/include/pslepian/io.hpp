#pragma once

#include "pslepian/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pslepian {

// Comma-separated table with one header row. Lines starting with '#' are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// "t,value" per node; several paths become columns value_0, value_1, ...
// `comment`, when nonempty, is written first as "# comment".
void write_paths_csv(std::ostream& out, const TimeGrid& grid, Support support,
                     const std::vector<std::vector<double>>& paths, const std::string& comment = {});

// "t_left,value" per cell.
void write_function_csv(std::ostream& out, const SampledFunction& f, const std::string& comment = {});

// Column `column` of a node table; t must match the grid nodes of `support`.
SampledPath path_from_csv(const CsvTable& table, const TimeGrid& grid, Support support, std::size_t column = 1);

// Column `column` of a cell table; t_left must match the cell left ends.
SampledFunction function_from_csv(const CsvTable& table, const TimeGrid& grid, Support support,
                                  std::size_t column = 1);

} // namespace pslepian
