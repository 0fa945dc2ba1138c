// tests/support/test_support.hpp — oracles and fixtures shared by the unit
// and acceptance suites. Everything here is deliberately independent of the
// implementation paths it checks: the effective-dimension oracle is a plain
// cumulative-sum scan, gradients come from central finite differences of
// the forward loss, and random fixtures use their own generator streams.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fimeff/barlow_twins.hpp"
#include "fimeff/matrix.hpp"
#include "fimeff/rng.hpp"

namespace fimeff::testing {

// Brute-force Def.-3 scan: smallest k whose cumulative mass fraction
// reaches 1−ε. No tie handling; callers use it on generic spectra.
inline std::size_t brute_force_effective_dimension(const std::vector<double>& lambda,
                                                   double epsilon) {
    double total = 0.0;
    for (double v : lambda) total += v;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        cumulative += lambda[k];
        if (cumulative / total >= 1.0 - epsilon) return k + 1;
    }
    return lambda.size();
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                            double scale = 1.0) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * rng.gaussian();
    return m;
}

// Entries uniform in [−1, 1], symmetric.
inline SymMatrix random_symmetric(std::size_t dim, Rng& rng) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) m.set(i, j, 2.0 * rng.uniform() - 1.0);
    return m;
}

// (MMᵀ)/d + δI: comfortably positive definite.
inline SymMatrix random_pd(std::size_t dim, Rng& rng, double ridge = 0.1) {
    const Matrix m = random_matrix(dim, dim, rng);
    SymMatrix out = SymMatrix::symmetrized(m * m.transposed())
                        .scaled(1.0 / static_cast<double>(dim));
    return out.plus_scaled_identity(ridge);
}

inline EmbeddingBatch random_batch(std::size_t n, std::size_t d, Rng& rng) {
    return EmbeddingBatch(random_matrix(n, d, rng));
}

// Central finite differences of bt_loss with respect to C.
inline Matrix fd_grad_wrt_C(const Matrix& c, double lambda, double step = 1e-5) {
    Matrix grad(c.rows(), c.cols());
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            Matrix plus = c, minus = c;
            plus(i, j) += step;
            minus(i, j) -= step;
            grad(i, j) = (barlow::bt_loss(plus, lambda).total -
                          barlow::bt_loss(minus, lambda).total) /
                         (2.0 * step);
        }
    }
    return grad;
}

inline double batch_loss(const Matrix& za, const Matrix& zb, double lambda) {
    const EmbeddingBatch a{za};
    const EmbeddingBatch b{zb};
    return barlow::bt_loss(barlow::cross_correlation(a, b), lambda).total;
}

// Central finite differences of the full pipeline loss with respect to
// every entry of one view.
inline Matrix fd_grad_batch(const Matrix& za, const Matrix& zb, double lambda,
                            bool wrt_a, double step = 1e-5) {
    const Matrix& target = wrt_a ? za : zb;
    Matrix grad(target.rows(), target.cols());
    for (std::size_t b = 0; b < target.rows(); ++b) {
        for (std::size_t k = 0; k < target.cols(); ++k) {
            Matrix plus = target, minus = target;
            plus(b, k) += step;
            minus(b, k) -= step;
            const double loss_plus =
                wrt_a ? batch_loss(plus, zb, lambda) : batch_loss(za, plus, lambda);
            const double loss_minus =
                wrt_a ? batch_loss(minus, zb, lambda) : batch_loss(za, minus, lambda);
            grad(b, k) = (loss_plus - loss_minus) / (2.0 * step);
        }
    }
    return grad;
}

// max over entries of |analytic − numeric| − max(abs_tol, rel_tol·|numeric|);
// <= 0 means every entry is inside the mixed tolerance.
inline double grad_mismatch(const Matrix& analytic, const Matrix& numeric,
                            double abs_tol = 1e-6, double rel_tol = 1e-4) {
    double worst = -1.0;
    for (std::size_t i = 0; i < analytic.rows(); ++i) {
        for (std::size_t j = 0; j < analytic.cols(); ++j) {
            const double err = std::abs(analytic(i, j) - numeric(i, j));
            const double allowed = std::max(abs_tol, rel_tol * std::abs(numeric(i, j)));
            worst = std::max(worst, err - allowed);
        }
    }
    return worst;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

// Per-process scratch directory, cleaned up on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("fimeff_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

} // namespace fimeff::testing
