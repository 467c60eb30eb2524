#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfbp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (matrix-vector products, operator dimensions).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A configuration or operator parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An iterative estimate failed to reach its tolerance. Carries the best value seen.
class EstimationError : public Error {
public:
    EstimationError(const std::string& what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}
    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// The iteration produced a non-finite value.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t iteration, std::string stage)
        : Error(what), iteration_(iteration), stage_(std::move(stage)) {}
    std::size_t iteration() const noexcept { return iteration_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::size_t iteration_;
    std::string stage_;
};

/// Malformed input file. Row and column are 1-based; 0 means "not applicable".
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what), row_(row), column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// The oracle has no exact projection for the requested instance.
class UnsupportedInstance : public Error {
public:
    using Error::Error;
};

}  // namespace gfbp
