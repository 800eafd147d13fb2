#include "sylnet/dense_matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace sylnet {

namespace {

[[noreturn]] void shape_fail(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
    throw dimension_error(std::string(op) + ": incompatible shapes " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

} // namespace

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_)
            throw dimension_error("DenseMatrix: ragged initializer list");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::block(std::size_t row0, std::size_t col0,
                               std::size_t nrows, std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_)
        throw dimension_error("block: range out of bounds");
    DenseMatrix b(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j)
            b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

void DenseMatrix::set_block(std::size_t row0, std::size_t col0, const DenseMatrix& m) {
    if (row0 + m.rows() > rows_ || col0 + m.cols() > cols_)
        throw dimension_error("set_block: range out of bounds");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            (*this)(row0 + i, col0 + j) = m(i, j);
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    if (!same_shape(other)) shape_fail("operator+=", *this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    if (!same_shape(other)) shape_fail("operator-=", *this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

void DenseMatrix::axpy(double alpha, const DenseMatrix& other) {
    if (!same_shape(other)) shape_fail("axpy", *this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += alpha * other.data_[k];
}

void DenseMatrix::set_zero() {
    std::fill(data_.begin(), data_.end(), 0.0);
}

bool DenseMatrix::is_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix r = a;
    r += b;
    return r;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix r = a;
    r -= b;
    return r;
}

DenseMatrix operator-(const DenseMatrix& a) {
    DenseMatrix r = a;
    r *= -1.0;
    return r;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix r;
    multiply_into(r, a, b);
    return r;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix r = a;
    r *= s;
    return r;
}

void multiply_into(DenseMatrix& out, const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) shape_fail("multiply", a, b);
    out = DenseMatrix(a.rows(), b.cols());
    multiply_add_into(out, a, b);
}

void multiply_add_into(DenseMatrix& out, const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) shape_fail("multiply", a, b);
    if (out.rows() != a.rows() || out.cols() != b.cols()) shape_fail("multiply output", out, b);
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* od = out.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ad[i * k + p];
            if (aip == 0.0) continue;
            const double* brow = bd + p * m;
            double* orow = od + i * m;
            for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
        }
    }
}

void multiply_sub_into(DenseMatrix& out, const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) shape_fail("multiply", a, b);
    if (out.rows() != a.rows() || out.cols() != b.cols()) shape_fail("multiply output", out, b);
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* od = out.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ad[i * k + p];
            if (aip == 0.0) continue;
            const double* brow = bd + p * m;
            double* orow = od + i * m;
            for (std::size_t j = 0; j < m; ++j) orow[j] -= aip * brow[j];
        }
    }
}

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) shape_fail("frobenius_inner", a, b);
    double s = 0.0;
    auto ad = a.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < ad.size(); ++k) s += ad[k] * bd[k];
    return s;
}

double frobenius_norm(const DenseMatrix& m) {
    return std::sqrt(frobenius_inner(m, m));
}

DenseMatrix vec(const DenseMatrix& m) {
    DenseMatrix v(m.rows() * m.cols(), 1);
    std::size_t k = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            v(k++, 0) = m(i, j);
    return v;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const double aij = a(ia, ja);
            if (aij == 0.0) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    k(ia * b.rows() + ib, ja * b.cols() + jb) = aij * b(ib, jb);
        }
    return k;
}

} // namespace sylnet
