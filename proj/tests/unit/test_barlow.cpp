#include <doctest.h>

#include <cmath>
#include <vector>

#include "fimeff/barlow_twins.hpp"
#include "fimeff/spectral.hpp"
#include "support/test_support.hpp"

using namespace fimeff;
using namespace fimeff::barlow;
using namespace fimeff::testing;

namespace {

// The four-row sign-pattern batch whose centered columns are exactly
// orthogonal with equal norms, so C = I exactly.
Matrix sign_pattern_batch() {
    return Matrix(4, 2, {1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0});
}

} // namespace

TEST_SUITE("barlow_twins") {

TEST_CASE("augment_pair: determinism and the zero-noise limit") {
    Rng rng(1);
    const EmbeddingBatch z = random_batch(16, 3, rng);

    const AugmentationModel aug{0.5, 99};
    const auto [a1, b1] = augment_pair(z, aug);
    const auto [a2, b2] = augment_pair(z, aug);
    CHECK(a1 == z);
    CHECK(b1 == b2);

    const AugmentationModel tiny{1e-30, 7};
    const auto [a3, b3] = augment_pair(z, tiny);
    CHECK(max_abs_diff(b3.rows(), z.rows()) <= 1e-12);

    CHECK_THROWS_AS(AugmentationModel(0.0, 1), InputError);
    CHECK_THROWS_AS(AugmentationModel(-1.0, 1), InputError);
}

TEST_CASE("augment_pair: noise covariance matches σ_ε²·I") {
    Rng rng(2);
    const std::size_t n = 100000;
    const EmbeddingBatch z = random_batch(n, 2, rng);
    const double noise_var = 0.7;
    const auto [a, b] = augment_pair(z, AugmentationModel{noise_var, 11});

    const SymMatrix diff_cov =
        spectral::covariance(EmbeddingBatch{b.rows() - a.rows()}, true);
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(diff_cov(0, 0) - noise_var) <= tol);
    CHECK(std::abs(diff_cov(1, 1) - noise_var) <= tol);
    CHECK(std::abs(diff_cov(0, 1)) <= tol);
}

TEST_CASE("cross_correlation: self-correlation has unit diagonal") {
    Rng rng(3);
    const EmbeddingBatch z = random_batch(32, 4, rng);
    const Matrix c = cross_correlation(z, z);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(c(i, i) - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(c(i, j)) <= 1.0 + 1e-12);
}

TEST_CASE("cross_correlation: sign-pattern batch gives C = I exactly") {
    const EmbeddingBatch z{sign_pattern_batch()};
    const Matrix c = cross_correlation(z, z);
    CHECK(c(0, 0) == 1.0);
    CHECK(c(1, 1) == 1.0);
    CHECK(c(0, 1) == 0.0);
    CHECK(c(1, 0) == 0.0);
}

TEST_CASE("cross_correlation: estimator limit under additive noise") {
    // Σ_z = diag(2, 1), σ_ε² = 1: the Eq.-4 estimator diagonal converges to
    // √(ν_i/(ν_i+σ_ε²)), the population correlation of z and z+ε. This is
    // deliberately distinct from the whitened closed form ν/(ν+σ_ε²).
    const std::size_t n = 100000;
    Rng rng(4);
    Matrix rows(n, 2);
    for (std::size_t b = 0; b < n; ++b) {
        rows(b, 0) = std::sqrt(2.0) * rng.gaussian();
        rows(b, 1) = rng.gaussian();
    }
    const EmbeddingBatch z{std::move(rows)};
    const auto [a, b] = augment_pair(z, AugmentationModel{1.0, 5});
    const Matrix c = cross_correlation(a, b);
    const double tol = 3.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(c(0, 0) - std::sqrt(2.0 / 3.0)) <= tol);
    CHECK(std::abs(c(1, 1) - std::sqrt(1.0 / 2.0)) <= tol);
}

TEST_CASE("cross_correlation: invariant under per-column affine maps") {
    Rng rng(5);
    const Matrix base_a = random_matrix(24, 3, rng);
    const Matrix base_b = random_matrix(24, 3, rng);
    const Matrix reference =
        cross_correlation(EmbeddingBatch{base_a}, EmbeddingBatch{base_b});

    const std::vector<double> scale_a{2.0, 0.25, 7.0};
    const std::vector<double> shift_a{-3.0, 0.5, 100.0};
    const std::vector<double> scale_b{5.0, 1e-3, 1.0};
    const std::vector<double> shift_b{0.0, 42.0, -1.0};
    Matrix mapped_a = base_a, mapped_b = base_b;
    for (std::size_t r = 0; r < 24; ++r) {
        for (std::size_t i = 0; i < 3; ++i) {
            mapped_a(r, i) = scale_a[i] * mapped_a(r, i) + shift_a[i];
            mapped_b(r, i) = scale_b[i] * mapped_b(r, i) + shift_b[i];
        }
    }
    const Matrix mapped =
        cross_correlation(EmbeddingBatch{mapped_a}, EmbeddingBatch{mapped_b});
    CHECK(max_abs_diff(reference, mapped) <= 1e-12);
}

TEST_CASE("cross_correlation: degenerate column and shape errors") {
    Matrix constant_col(4, 2);
    for (std::size_t r = 0; r < 4; ++r) {
        constant_col(r, 0) = static_cast<double>(r);
        constant_col(r, 1) = 3.0;
    }
    const EmbeddingBatch bad{constant_col};
    try {
        cross_correlation(bad, bad);
        FAIL("expected DegenerateColumnError");
    } catch (const DegenerateColumnError& e) {
        CHECK(e.dimension() == 1);
        CHECK(std::string(e.what()).find("dimension 1") != std::string::npos);
    }

    Rng rng(6);
    const EmbeddingBatch a = random_batch(8, 2, rng);
    const EmbeddingBatch b = random_batch(8, 3, rng);
    CHECK_THROWS_AS(cross_correlation(a, b), InputError);
}

TEST_CASE("population_cross_correlation: diagonal closed form") {
    const std::vector<double> nu{2.0, 1.0, 0.5};
    const double noise_var = 1.0;
    const SymMatrix c =
        population_cross_correlation(SymMatrix::diagonal(nu), noise_var);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(c(i, i) == doctest::Approx(nu[i] / (nu[i] + noise_var)).epsilon(1e-13));
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(c(i, j)) <= 1e-13);
    }
}

TEST_CASE("population_cross_correlation: high-SNR and degenerate limits") {
    const SymMatrix near_identity =
        population_cross_correlation(SymMatrix::identity(4).scaled(100.0), 1.0);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(near_identity(i, i) == doctest::Approx(100.0 / 101.0).epsilon(1e-12));

    const SymMatrix zero = population_cross_correlation(SymMatrix(3), 2.0);
    CHECK(zero.frobenius_norm() == 0.0);

    CHECK_THROWS_AS(population_cross_correlation(SymMatrix::identity(2), 0.0), InputError);
}

TEST_CASE("population_cross_correlation: isotropic input has an equal spectrum") {
    const SymMatrix c =
        population_cross_correlation(SymMatrix::identity(5).scaled(3.0), 2.0);
    const auto spectrum = spectral::eigh(c);
    const double expected = 3.0 / 5.0;
    CHECK(spectrum.eigenvalues.front() - spectrum.eigenvalues.back() <= 1e-12);
    CHECK(spectrum.eigenvalues.front() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("population_cross_correlation: Monte Carlo whitened-view agreement") {
    // Draw (z, z+ε) pairs, whiten both views with (Σ_z+σ_ε²I)^{-1/2} built
    // from the true covariance, and average the outer product.
    const std::size_t n = 100000;
    const std::vector<double> nu{2.0, 1.0};
    const double noise_var = 1.0;
    const SymMatrix cov = SymMatrix::diagonal(nu);
    const Matrix w = spectral::inv_sqrt(cov.plus_scaled_identity(noise_var)).to_matrix();

    Rng rng(7);
    Matrix accum(2, 2);
    for (std::size_t s = 0; s < n; ++s) {
        const double z0 = std::sqrt(2.0) * rng.gaussian();
        const double z1 = rng.gaussian();
        const double b0 = z0 + rng.gaussian();
        const double b1 = z1 + rng.gaussian();
        const double wa0 = w(0, 0) * z0 + w(0, 1) * z1;
        const double wa1 = w(1, 0) * z0 + w(1, 1) * z1;
        const double wb0 = w(0, 0) * b0 + w(0, 1) * b1;
        const double wb1 = w(1, 0) * b0 + w(1, 1) * b1;
        accum(0, 0) += wa0 * wb0;
        accum(0, 1) += wa0 * wb1;
        accum(1, 0) += wa1 * wb0;
        accum(1, 1) += wa1 * wb1;
    }
    const SymMatrix expected = population_cross_correlation(cov, noise_var);
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(accum(i, j) / static_cast<double>(n) - expected(i, j)) <= tol);
}

TEST_CASE("bt_loss: exact values") {
    for (double lambda : {0.005, 0.1, 1.0, 5.0}) {
        const BtLossBreakdown at_identity = bt_loss(Matrix::identity(3), lambda);
        CHECK(at_identity.invariance == 0.0);
        CHECK(at_identity.redundancy == 0.0);
        CHECK(at_identity.total == 0.0);
    }

    const BtLossBreakdown at_zero = bt_loss(Matrix(4, 4), 5.0);
    CHECK(at_zero.invariance == 4.0);
    CHECK(at_zero.redundancy == 0.0);
    CHECK(at_zero.total == 4.0);

    Matrix hand = Matrix::identity(2);
    hand(0, 1) = 0.5;
    hand(1, 0) = 0.5;
    const BtLossBreakdown breakdown = bt_loss(hand, 2.0);
    CHECK(breakdown.invariance == 0.0);
    CHECK(breakdown.redundancy == 0.5);
    CHECK(breakdown.total == 1.0);

    CHECK_THROWS_AS(bt_loss(Matrix(2, 3), 1.0), InputError);
    CHECK_THROWS_AS(bt_loss(Matrix::identity(2), 0.0), InputError);
}

TEST_CASE("bt_loss: nonnegative, zero only at C = I") {
    Rng rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        Matrix c = Matrix::identity(4);
        const std::size_t i = static_cast<std::size_t>(rng.uniform() * 4.0);
        const std::size_t j = static_cast<std::size_t>(rng.uniform() * 4.0);
        c(i, j) += (rng.uniform() - 0.5);
        const BtLossBreakdown b = bt_loss(c, 0.7);
        CHECK(b.total == b.invariance + 0.7 * b.redundancy);
        if (c == Matrix::identity(4)) continue; // perturbation can be 0
        CHECK(b.total > 0.0);
    }
}

TEST_CASE("bt_loss_grad_wrt_C: closed form and finite differences") {
    CHECK(bt_loss_grad_wrt_C(Matrix::identity(4), 2.0).frobenius_norm() == 0.0);

    const Matrix at_zero = bt_loss_grad_wrt_C(Matrix(3, 3), 1.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(at_zero(i, j) == (i == j ? -2.0 : 0.0));

    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix c = random_matrix(4, 4, rng);
        const double lambda = 0.1 + rng.uniform();
        CHECK(grad_mismatch(bt_loss_grad_wrt_C(c, lambda), fd_grad_wrt_C(c, lambda)) <= 0.0);
    }
}

TEST_CASE("bt_loss_grad_wrt_batches: finite-difference agreement") {
    Rng rng(10);
    for (std::size_t n : {4u, 16u}) {
        for (std::size_t d : {2u, 8u}) {
            if (d >= n) continue;
            for (int rep = 0; rep < 3; ++rep) {
                const Matrix za = random_matrix(n, d, rng);
                const Matrix zb = random_matrix(n, d, rng);
                const double lambda = 0.2 + rng.uniform();
                const auto [ga, gb] = bt_loss_grad_wrt_batches(EmbeddingBatch{za},
                                                               EmbeddingBatch{zb}, lambda);
                CHECK(grad_mismatch(ga, fd_grad_batch(za, zb, lambda, true)) <= 0.0);
                CHECK(grad_mismatch(gb, fd_grad_batch(za, zb, lambda, false)) <= 0.0);
            }
        }
    }
}

TEST_CASE("bt_loss_grad_wrt_batches: at the optimum the gradient matches FD") {
    const Matrix z = sign_pattern_batch();
    const auto [ga, gb] =
        bt_loss_grad_wrt_batches(EmbeddingBatch{z}, EmbeddingBatch{z}, 0.5);
    CHECK(grad_mismatch(ga, fd_grad_batch(z, z, 0.5, true)) <= 0.0);
    CHECK(grad_mismatch(gb, fd_grad_batch(z, z, 0.5, false)) <= 0.0);
    // dL/dC = 0 at C = I, so the chained gradient vanishes identically.
    CHECK(ga.frobenius_norm() == 0.0);
    CHECK(gb.frobenius_norm() == 0.0);
}

TEST_CASE("bt_loss_grad_wrt_batches: column rescaling is a null direction") {
    Rng rng(12);
    const Matrix za = random_matrix(16, 3, rng);
    const Matrix zb = random_matrix(16, 3, rng);
    const double lambda = 0.7;
    const auto [ga, gb] =
        bt_loss_grad_wrt_batches(EmbeddingBatch{za}, EmbeddingBatch{zb}, lambda);

    for (std::size_t col = 0; col < 3; ++col) {
        // Analytic directional derivative along scaling column `col` of za.
        double directional = 0.0;
        for (std::size_t r = 0; r < 16; ++r) directional += ga(r, col) * za(r, col);
        CHECK(std::abs(directional) <= 1e-8);

        // The loss itself is unchanged by the scaling.
        Matrix scaled = za;
        for (std::size_t r = 0; r < 16; ++r) scaled(r, col) *= 2.0;
        CHECK(std::abs(batch_loss(scaled, zb, lambda) - batch_loss(za, zb, lambda)) <=
              1e-12);

        // Central finite difference along the same direction.
        const double h = 1e-5;
        Matrix plus = za, minus = za;
        for (std::size_t r = 0; r < 16; ++r) {
            plus(r, col) *= 1.0 + h;
            minus(r, col) *= 1.0 - h;
        }
        const double fd =
            (batch_loss(plus, zb, lambda) - batch_loss(minus, zb, lambda)) / (2.0 * h);
        CHECK(std::abs(fd) <= 1e-8);
    }
}

TEST_CASE("LinearEncoder: forward map and constructors") {
    const Matrix w(2, 3, {1.0, 0.0, 0.0, 0.0, 2.0, 0.0});
    const LinearEncoder enc{w, {10.0, -1.0}};
    const Matrix x(2, 3, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const Matrix z = enc.forward(x);
    CHECK(z(0, 0) == 11.0);
    CHECK(z(0, 1) == 3.0);
    CHECK(z(1, 0) == 14.0);
    CHECK(z(1, 1) == 9.0);

    CHECK_THROWS_AS(LinearEncoder(w, {1.0}), InputError);
    CHECK_THROWS_AS(enc.forward(Matrix(2, 4)), InputError);

    const LinearEncoder r1 = LinearEncoder::random(4, 8, 123);
    const LinearEncoder r2 = LinearEncoder::random(4, 8, 123);
    CHECK(r1.weights == r2.weights);
    CHECK(LinearEncoder::zeros(2, 2).weights.frobenius_norm() == 0.0);
    CHECK(r1.operator_norm_bound() == r1.weights.frobenius_norm());
}

} // TEST_SUITE
