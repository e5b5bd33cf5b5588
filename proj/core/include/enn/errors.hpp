#pragma once

#include <stdexcept>
#include <string>

namespace enn {

/// Cholesky pivot was non-positive: the matrix handed to an SPD solve is
/// degenerate. Callers holding ensemble covariances should regularize
/// (see spd_solve_regularized) before treating this as fatal.
class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NegativeVariance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV ingestion failure with 0-based row/column of the offending cell.
class ParseError : public std::runtime_error {
public:
    ParseError(long row, long col, const std::string& what)
        : std::runtime_error("parse error at row " + std::to_string(row) +
                             ", col " + std::to_string(col) + ": " + what),
          row(row), col(col) {}
    long row;
    long col;
};

class FileNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ColumnMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FixtureMissing : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The supplementary fixture forward-pass could not be reproduced by any
/// known activation/layout combination; fixture replay must not silently
/// proceed.
class LayoutUnresolved : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace enn
