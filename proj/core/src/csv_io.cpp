#include "enn/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "enn/errors.hpp"

namespace enn {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw FileNotFound("cannot write '" + path + "'");
    if (!header.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << "\n";
    }
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c)
            out << (c ? "," : "") << format_double(m(r, c));
        out << "\n";
    }
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    long r = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        long c = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(r, c, "cannot parse '" + cell + "'");
            }
            ++c;
        }
        if (!rows.empty() && vals.size() != rows.front().size())
            throw ParseError(r, c, "ragged row");
        rows.push_back(std::move(vals));
        ++r;
    }
    if (rows.empty()) throw ParseError(0, 0, "empty file '" + path + "'");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

} // namespace enn
