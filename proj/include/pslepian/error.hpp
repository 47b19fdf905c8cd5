#pragma once

#include <stdexcept>
#include <string>

namespace pslepian {

// Bad input: off-grid p, mismatched grids, malformed files.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A factorization or solve failed where the math says it cannot.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw PreconditionError(msg);
}

} // namespace pslepian
