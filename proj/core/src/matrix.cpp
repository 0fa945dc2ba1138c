// fimeff/matrix.cpp

#include "fimeff/matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace fimeff {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InputError("Matrix: storage size " + std::to_string(data_.size()) +
                         " does not match shape " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

void Matrix::require_same_shape(const Matrix& rhs, const char* op) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw InputError(std::string("Matrix ") + op + ": shape mismatch " +
                         std::to_string(rows_) + "x" + std::to_string(cols_) + " vs " +
                         std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
    }
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw InputError("Matrix product: inner dimensions " + std::to_string(cols_) +
                         " vs " + std::to_string(rhs.rows_));
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    require_same_shape(rhs, "sum");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    require_same_shape(rhs, "difference");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix Matrix::scaled(double factor) const {
    Matrix out = *this;
    for (double& v : out.data_) v *= factor;
    return out;
}

double Matrix::frobenius_norm() const {
    double sum = 0.0;
    for (double v : data_) sum += v * v;
    return std::sqrt(sum);
}

bool Matrix::is_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim_ < 1) throw InputError("SymMatrix: dim must be >= 1");
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> entries) {
    SymMatrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m.set(i, i, entries[i]);
    return m;
}

SymMatrix SymMatrix::symmetrized(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw InputError("SymMatrix::symmetrized: matrix is " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ", not square");
    }
    SymMatrix m(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    return m;
}

Matrix SymMatrix::to_matrix() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

SymMatrix SymMatrix::operator+(const SymMatrix& rhs) const {
    if (dim_ != rhs.dim_) {
        throw InputError("SymMatrix sum: dim " + std::to_string(dim_) + " vs " +
                         std::to_string(rhs.dim_));
    }
    SymMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

SymMatrix SymMatrix::scaled(double factor) const {
    SymMatrix out = *this;
    for (double& v : out.data_) v *= factor;
    return out;
}

SymMatrix SymMatrix::plus_scaled_identity(double c) const {
    SymMatrix out = *this;
    for (std::size_t i = 0; i < dim_; ++i) out.set(i, i, (*this)(i, i) + c);
    return out;
}

double SymMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (double v : data_) sum += v * v;
    return std::sqrt(sum);
}

bool SymMatrix::is_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

EmbeddingBatch::EmbeddingBatch(Matrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 2) {
        throw InputError("EmbeddingBatch: need n >= 2 rows, got " +
                         std::to_string(rows_.rows()));
    }
    if (rows_.cols() < 1) throw InputError("EmbeddingBatch: need d >= 1 columns");
    if (!rows_.is_finite()) throw InputError("EmbeddingBatch: non-finite entry");
}

} // namespace fimeff
