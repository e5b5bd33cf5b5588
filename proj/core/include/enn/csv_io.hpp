#pragma once

#include <string>
#include <vector>

#include "enn/matrix.hpp"

namespace enn {

/// %.17g formatting: shortest text that round-trips an IEEE double.
std::string format_double(double v);

/// Write a matrix as CSV, optionally with a header row.
void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& header = {});

/// Read a plain numeric CSV ('#' comments skipped, no header).
Matrix read_matrix_csv(const std::string& path);

} // namespace enn
