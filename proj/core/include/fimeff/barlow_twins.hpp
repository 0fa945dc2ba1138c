// fimeff/barlow_twins.hpp — the Barlow Twins objective on embedding batches.
//
// Two distinct cross-correlation conventions live here on purpose:
//
//   cross_correlation            the batch estimator — center each column
//                                over the batch, then normalize by column
//                                norms. Its diagonal converges to
//                                √(ν_i/(ν_i+σ_ε²)) under additive noise.
//   population_cross_correlation the closed form
//                                (Σ_z+σ_ε²I)^{-1/2} Σ_z (Σ_z+σ_ε²I)^{-1/2},
//                                which whitens both views by the same map
//                                and gives ν_i/(ν_i+σ_ε²) on the diagonal.
//
// They agree on when C = I is reached but not on intermediate values; each
// is validated against its own oracle in the test suite.

#pragma once

#include <cstdint>
#include <utility>

#include "fimeff/matrix.hpp"
#include "fimeff/rng.hpp"

namespace fimeff::barlow {

// Additive isotropic Gaussian view noise: z^B = z^A + ε, ε ~ N(0, σ_ε²·I).
struct AugmentationModel {
    double noise_var; // σ_ε² > 0
    std::uint64_t seed = 0;

    AugmentationModel(double noise_var, std::uint64_t seed);
};

struct BtLossBreakdown {
    double invariance = 0.0; // Σ_i (1 − C_ii)²
    double redundancy = 0.0; // Σ_{i≠j} C_ij²
    double lambda = 0.0;     // trade-off weight, > 0
    double total = 0.0;      // invariance + lambda·redundancy, exactly
};

struct LinearEncoder {
    Matrix weights;           // d_out × d_in
    std::vector<double> bias; // d_out

    LinearEncoder(Matrix weights, std::vector<double> bias);

    std::size_t d_in() const noexcept { return weights.cols(); }
    std::size_t d_out() const noexcept { return weights.rows(); }

    // Z = X·Wᵀ + 1·bᵀ for an n × d_in input.
    Matrix forward(const Matrix& inputs) const;

    // Entries ~ N(0, 1/d_in), zero bias.
    static LinearEncoder random(std::size_t d_out, std::size_t d_in, std::uint64_t seed);
    static LinearEncoder zeros(std::size_t d_out, std::size_t d_in);

    // ‖W‖_F, an upper bound on the operator norm and hence on the
    // Lipschitz constant of the map.
    double operator_norm_bound() const { return weights.frobenius_norm(); }
};

// (Z^A, Z^B) with Z^A = z and Z^B = z + E, E rows i.i.d. N(0, σ_ε²·I) from
// a generator seeded with aug.seed. Pure: the same (batch, model) always
// produces the same pair.
std::pair<EmbeddingBatch, EmbeddingBatch> augment_pair(const EmbeddingBatch& z,
                                                       const AugmentationModel& aug);

// Variant drawing from a caller-owned generator (one stream across calls).
std::pair<EmbeddingBatch, EmbeddingBatch> augment_pair(const EmbeddingBatch& z,
                                                       double noise_var, Rng& rng);

// C_ij = Σ_b A_bi·B_bj / (‖a_i‖·‖b_j‖) after centering every column over
// the batch. Not symmetric in general. A column whose post-centering
// standard deviation is <= 1e-12 raises DegenerateColumnError naming the
// dimension (that is dimensional collapse, not a condition to paper over).
Matrix cross_correlation(const EmbeddingBatch& za, const EmbeddingBatch& zb);

// (Σ_z + σ_ε²I)^{-1/2} Σ_z (Σ_z + σ_ε²I)^{-1/2}, symmetric by construction.
SymMatrix population_cross_correlation(const SymMatrix& cov_z, double noise_var);

BtLossBreakdown bt_loss(const Matrix& c, double lambda);

// ∂L/∂C: diagonal −2(1 − C_ii), off-diagonal 2λ·C_ij.
Matrix bt_loss_grad_wrt_C(const Matrix& c, double lambda);

// Exact gradients of bt_loss(cross_correlation(Z^A, Z^B)) with respect to
// every batch entry, differentiated through the centering and the
// per-column normalization. Derivation, with u_i / v_j the centered
// columns, p_i = ‖u_i‖, q_j = ‖v_j‖, C_ij = u_iᵀv_j/(p_i q_j) and
// G = ∂L/∂C:
//   ∂C_ij/∂u_i = v_j/(p_i q_j) − (C_ij/p_i²)·u_i
//   ∂L/∂u_i    = Σ_j G_ij v_j/(p_i q_j) − (Σ_j G_ij C_ij / p_i²)·u_i
// and the centering projector P = I − (1/n)·11ᵀ acts as the identity on
// the right-hand side because every u, v is already centered. In matrix
// form with W_ij = G_ij/(p_i q_j):
//   ∂L/∂Z^A = V·Wᵀ − U·diag(t),  t_i = Σ_j G_ij C_ij / p_i²
//   ∂L/∂Z^B = U·W  − V·diag(r),  r_j = Σ_i G_ij C_ij / q_j²
std::pair<Matrix, Matrix> bt_loss_grad_wrt_batches(const EmbeddingBatch& za,
                                                   const EmbeddingBatch& zb,
                                                   double lambda);

} // namespace fimeff::barlow
