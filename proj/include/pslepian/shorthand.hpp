#pragma once

#include "pslepian/rkhs.hpp"

#include <string>

namespace pslepian {

// Shift grammar:  const:<c> | c:<c> | linear:<slope> | mixed:<c>,<slope> | <csv of window node values>
KernelElement parse_shift(const std::string& text, const TimeGrid& grid);

// Source grammar: const:<v> | linear:<slope> | random:<seed> | <csv of cell values on [0,1]>
// linear uses cell midpoints, so every integral of f is exact.
SourceFunction parse_source(const std::string& text, const TimeGrid& grid);

// Standard normal cell values from stream (seed, 0).
SampledFunction random_function(const TimeGrid& grid, std::uint64_t seed);

} // namespace pslepian
