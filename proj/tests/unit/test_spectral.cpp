#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fimeff/sampling.hpp"
#include "fimeff/spectral.hpp"
#include "support/test_support.hpp"

using namespace fimeff;
using namespace fimeff::testing;

namespace {

double orthonormality_residual(const Matrix& v) {
    const Matrix gram = v.transposed() * v;
    return (gram - Matrix::identity(v.rows())).frobenius_norm();
}

double reconstruction_residual(const spectral::SymmetricSpectrum& s, const SymMatrix& a) {
    const std::size_t d = a.dim();
    Matrix scaled = s.eigenvectors; // V·diag(λ)
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) scaled(i, j) *= s.eigenvalues[j];
    return (scaled * s.eigenvectors.transposed() - a.to_matrix()).frobenius_norm();
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("eigh: identity matrix") {
    const auto s = spectral::eigh(SymMatrix::identity(3));
    for (double ev : s.eigenvalues) CHECK(ev == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(orthonormality_residual(s.eigenvectors) <= 1e-10 * 3);
}

TEST_CASE("eigh: diagonal matrix keeps axis eigenvectors up to sign") {
    const std::vector<double> diag{4.0, 1.0};
    const auto s = spectral::eigh(SymMatrix::diagonal(diag));
    CHECK(s.eigenvalues[0] == 4.0);
    CHECK(s.eigenvalues[1] == 1.0);
    CHECK(std::abs(s.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.eigenvectors(1, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(s.eigenvectors(1, 0)) == doctest::Approx(0.0));
}

TEST_CASE("eigh: 2x2 against the characteristic-polynomial roots") {
    SymMatrix a(2);
    a.set(0, 0, 2.0);
    a.set(1, 1, 2.0);
    a.set(0, 1, 1.0);
    // λ² − tr·λ + det = 0, solved directly as the oracle.
    const double tr = 4.0, det = 3.0;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    const double hi = (tr + disc) / 2.0, lo = (tr - disc) / 2.0;
    const auto s = spectral::eigh(a);
    CHECK(s.eigenvalues[0] == doctest::Approx(hi).epsilon(1e-14)); // 3
    CHECK(s.eigenvalues[1] == doctest::Approx(lo).epsilon(1e-14)); // 1
}

TEST_CASE("eigh: scalar case") {
    SymMatrix a(1);
    a.set(0, 0, -7.5);
    const auto s = spectral::eigh(a);
    CHECK(s.eigenvalues[0] == -7.5);
    CHECK(s.eigenvectors(0, 0) == 1.0);
}

TEST_CASE("eigh: rejects non-finite input") {
    SymMatrix a(2);
    a.set(0, 1, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(spectral::eigh(a), InputError);
}

TEST_CASE("eigh: reconstruction and orthonormality on random symmetric matrices") {
    Rng rng(101);
    for (std::size_t d : {2u, 3u, 5u, 8u, 16u, 33u, 64u}) {
        for (int rep = 0; rep < 3; ++rep) {
            const SymMatrix a = random_symmetric(d, rng);
            const auto s = spectral::eigh(a);
            CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
            CHECK(orthonormality_residual(s.eigenvectors) <= 1e-10 * static_cast<double>(d));
            CHECK(reconstruction_residual(s, a) <= 1e-10 * (1.0 + a.frobenius_norm()));
        }
    }
}

TEST_CASE("eigh: deterministic for a fixed input") {
    Rng rng(7);
    const SymMatrix a = random_symmetric(12, rng);
    const auto s1 = spectral::eigh(a);
    const auto s2 = spectral::eigh(a);
    CHECK(s1.eigenvalues == s2.eigenvalues);
    CHECK(s1.eigenvectors == s2.eigenvectors);
}

TEST_CASE("inv_sqrt: scaled identity") {
    const SymMatrix b = spectral::inv_sqrt(SymMatrix::identity(2).scaled(4.0), 1e-12);
    CHECK(b(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b(0, 1) == 0.0);

    const SymMatrix eye = spectral::inv_sqrt(SymMatrix::identity(5));
    CHECK(max_abs_diff(eye, SymMatrix::identity(5)) <= 1e-14);
}

TEST_CASE("inv_sqrt: floor replaces a collapsed eigenvalue") {
    const std::vector<double> diag{1.0, 1e-20};
    const SymMatrix b = spectral::inv_sqrt(SymMatrix::diagonal(diag), 1e-12);
    CHECK(b(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b(1, 1) == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("inv_sqrt: default floor keeps collapsed dimensions finite") {
    const std::vector<double> diag{1.0, 0.0};
    const SymMatrix b = spectral::inv_sqrt(SymMatrix::diagonal(diag));
    CHECK(std::isfinite(b(1, 1)));
    CHECK(b(1, 1) == doctest::Approx(1e6).epsilon(1e-12)); // 1/sqrt(1e-12·max(1,1))
}

TEST_CASE("inv_sqrt: rejects indefinite input") {
    const std::vector<double> diag{1.0, -1.0};
    CHECK_THROWS_AS(spectral::inv_sqrt(SymMatrix::diagonal(diag)), NotPsdError);
}

TEST_CASE("inv_sqrt: B·A·B recovers the identity and B commutes with A") {
    Rng rng(202);
    for (std::size_t d : {2u, 4u, 8u, 16u}) {
        const SymMatrix a = random_pd(d, rng);
        const SymMatrix b = spectral::inv_sqrt(a, 1e-15);
        const Matrix bm = b.to_matrix();
        const Matrix am = a.to_matrix();
        CHECK((bm * am * bm - Matrix::identity(d)).frobenius_norm() <=
              1e-8 * static_cast<double>(d));
        CHECK((bm * am - am * bm).frobenius_norm() <= 1e-8 * a.frobenius_norm());
    }
}

TEST_CASE("covariance: two-point symmetric batch") {
    const Matrix rows(2, 2, {1.0, 0.0, -1.0, 0.0});
    const SymMatrix cov = spectral::covariance(EmbeddingBatch{rows}, true);
    CHECK(cov(0, 0) == 1.0);
    CHECK(cov(0, 1) == 0.0);
    CHECK(cov(1, 1) == 0.0);
}

TEST_CASE("covariance: identical rows center to zero") {
    const Matrix rows(3, 2, {2.0, -1.0, 2.0, -1.0, 2.0, -1.0});
    const SymMatrix centered = spectral::covariance(EmbeddingBatch{rows}, true);
    CHECK(centered.frobenius_norm() == 0.0);
    // Uncentered second moment is the outer product instead.
    const SymMatrix raw = spectral::covariance(EmbeddingBatch{rows}, false);
    CHECK(raw(0, 0) == doctest::Approx(4.0));
    CHECK(raw(0, 1) == doctest::Approx(-2.0));
    CHECK(raw(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("covariance: Monte Carlo agreement with the sampling law") {
    const std::size_t n = 100000;
    Rng rng(303);
    Matrix rows(n, 2);
    for (std::size_t b = 0; b < n; ++b) {
        rows(b, 0) = std::sqrt(2.0) * rng.gaussian();
        rows(b, 1) = rng.gaussian();
    }
    const SymMatrix cov = spectral::covariance(EmbeddingBatch{std::move(rows)}, true);
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(cov(0, 0) - 2.0) <= tol * 2.0);
    CHECK(std::abs(cov(1, 1) - 1.0) <= tol);
    CHECK(std::abs(cov(0, 1)) <= tol * std::sqrt(2.0));
}

TEST_CASE("covariance: invariant under row permutation") {
    Rng rng(404);
    const Matrix rows = random_matrix(64, 5, rng);
    Matrix reversed(64, 5);
    for (std::size_t b = 0; b < 64; ++b)
        for (std::size_t j = 0; j < 5; ++j) reversed(b, j) = rows(63 - b, j);
    const SymMatrix c1 = spectral::covariance(EmbeddingBatch{rows}, true);
    const SymMatrix c2 = spectral::covariance(EmbeddingBatch{reversed}, true);
    CHECK(max_abs_diff(c1, c2) <= 1e-12);
}

TEST_CASE("covariance: conjugates under an orthogonal map") {
    Rng rng(505);
    const Matrix rows = random_matrix(256, 4, rng);
    Rng qrng(506);
    const Matrix q = random_orthogonal(4, qrng);

    const SymMatrix direct =
        spectral::covariance(EmbeddingBatch{rows * q.transposed()}, true);
    const Matrix expected =
        q * spectral::covariance(EmbeddingBatch{rows}, true).to_matrix() * q.transposed();
    CHECK(max_abs_diff(direct.to_matrix(), expected) <= 1e-12);
}

TEST_CASE("condition_number") {
    spectral::SymmetricSpectrum s{{1.0, 1.0, 1.0}, Matrix::identity(3)};
    CHECK(spectral::condition_number(s) == 1.0);
    s.eigenvalues = {4.0, 1.0};
    CHECK(spectral::condition_number(s) == 4.0);
    s.eigenvalues = {1.0, 0.0};
    CHECK(std::isinf(spectral::condition_number(s)));
    s.eigenvalues = {1.0, -0.5};
    CHECK(std::isinf(spectral::condition_number(s)));
}

TEST_CASE("value types enforce their invariants") {
    SymMatrix m(3);
    m.set(0, 2, 1.5);
    CHECK(m(2, 0) == 1.5);
    CHECK_THROWS_AS(EmbeddingBatch{Matrix(1, 4)}, InputError);
    Matrix bad(2, 2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(EmbeddingBatch{bad}, InputError);
    CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>(3, 0.0)), InputError);
}

TEST_CASE("random_orthogonal produces orthonormal columns") {
    Rng rng(606);
    for (std::size_t d : {2u, 5u, 16u}) {
        const Matrix q = random_orthogonal(d, rng);
        CHECK(orthonormality_residual(q) <= 1e-12 * static_cast<double>(d));
    }
}

TEST_CASE("GaussianSampler matches its covariance in the large-sample limit") {
    Rng specrng(707);
    const SymMatrix target = random_pd(3, specrng);
    const GaussianSampler sampler(target);
    Rng rng(708);
    const std::size_t n = 100000;
    const Matrix draws = sampler.draw_matrix(rng, n);
    const SymMatrix empirical = spectral::covariance(EmbeddingBatch{draws}, true);
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    // entries of target are O(1); scale tolerance by the largest one
    double scale = 0.0;
    for (std::size_t i = 0; i < 3; ++i) scale = std::max(scale, target(i, i));
    CHECK(max_abs_diff(empirical, target) <= 5.0 * tol * scale);
}

} // TEST_SUITE
