// fimeff/matrix.hpp — dense matrix values used across the library.
//
// Matrix        general rectangular storage (row-major), used for batches,
//               gradients and the (generally non-symmetric) Eq.-style
//               cross-correlation estimate.
// SymMatrix     d×d symmetric-by-construction value; writes mirror both
//               triangles so entries[i][j] == entries[j][i] holds exactly.
// EmbeddingBatch n×d batch of representation vectors, n >= 2, all finite.
//
// Everything is an immutable-after-construction value type in practice;
// operations return new values and are safe to share across threads.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimeff/errors.hpp"

namespace fimeff {

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t dim);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(double factor) const;

    double frobenius_norm() const;
    bool is_finite() const;

    bool operator==(const Matrix&) const = default;

private:
    void require_same_shape(const Matrix& rhs, const char* op) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

class SymMatrix {
public:
    explicit SymMatrix(std::size_t dim);

    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(std::span<const double> entries);
    // Accepts a square matrix and stores (A + Aᵀ)/2, making near-symmetric
    // products exactly symmetric.
    static SymMatrix symmetrized(const Matrix& a);

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * dim_ + j];
    }

    // Mirrors the write into both triangles.
    void set(std::size_t i, std::size_t j, double value) {
        data_[i * dim_ + j] = value;
        data_[j * dim_ + i] = value;
    }

    Matrix to_matrix() const;

    SymMatrix operator+(const SymMatrix& rhs) const;
    SymMatrix scaled(double factor) const;
    // A + c·I, the (Σ_z + σ_ε² I) shift used by whitening.
    SymMatrix plus_scaled_identity(double c) const;

    double frobenius_norm() const;
    bool is_finite() const;

    bool operator==(const SymMatrix&) const = default;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

class EmbeddingBatch {
public:
    // Validates n >= 2 and finiteness of every entry.
    explicit EmbeddingBatch(Matrix rows);

    std::size_t n() const noexcept { return rows_.rows(); }
    std::size_t dim() const noexcept { return rows_.cols(); }

    const Matrix& rows() const noexcept { return rows_; }
    std::span<const double> row(std::size_t i) const { return rows_.row(i); }

    bool operator==(const EmbeddingBatch&) const = default;

private:
    Matrix rows_;
};

} // namespace fimeff
