#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sylnet/errors.hpp"

namespace sylnet {

/// Dense real matrix, row-major, double precision. The universal value type
/// for problem data, estimates and multipliers. Values are immutable in
/// spirit: every operation returns a fresh matrix or writes into an
/// explicitly named output.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, double fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    DenseMatrix transpose() const;
    DenseMatrix block(std::size_t row0, std::size_t col0,
                      std::size_t nrows, std::size_t ncols) const;
    void set_block(std::size_t row0, std::size_t col0, const DenseMatrix& m);

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s);

    /// this += alpha * other, shapes must match.
    void axpy(double alpha, const DenseMatrix& other);

    void set_zero();

    bool is_finite() const;
    double max_abs() const;

    /// Exact element-wise equality (used by determinism and locality tests).
    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// out = a * b. Shapes checked; out is resized.
void multiply_into(DenseMatrix& out, const DenseMatrix& a, const DenseMatrix& b);
/// out += a * b.
void multiply_add_into(DenseMatrix& out, const DenseMatrix& a, const DenseMatrix& b);
/// out -= a * b.
void multiply_sub_into(DenseMatrix& out, const DenseMatrix& a, const DenseMatrix& b);

/// Sum of element-wise products; symmetric in its arguments.
double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);
/// sqrt(frobenius_inner(m, m)).
double frobenius_norm(const DenseMatrix& m);

/// Column-major stacking of m into an (rows*cols) x 1 vector.
DenseMatrix vec(const DenseMatrix& m);
/// Kronecker product; satisfies vec(A X B) = kron(B^T, A) vec(X).
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

} // namespace sylnet
