#include "sylnet/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sylnet {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix(std::ostream& os, const DenseMatrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream os(path);
    if (!os) throw io_error("write_matrix: cannot open " + path.string());
    write_matrix(os, m);
}

DenseMatrix read_matrix(std::istream& is) {
    std::size_t rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw io_error("read_matrix: missing header");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (!(is >> m(i, j)))
                throw io_error("read_matrix: truncated at row " + std::to_string(i));
    if (!m.is_finite()) throw io_error("read_matrix: non-finite entry");
    return m;
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw io_error("read_matrix: cannot open " + path.string());
    return read_matrix(is);
}

} // namespace sylnet
