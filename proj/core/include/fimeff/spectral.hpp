// fimeff/spectral.hpp — dense symmetric eigenanalysis and covariance.
//
// Self-contained: a cyclic Jacobi eigensolver backs everything, so the
// library carries no linear-algebra dependency. Accuracy targets (checked
// by the test suite, for d up to 512):
//   orthonormality   ‖VᵀV − I‖_F    <= 1e-10·d
//   reconstruction   ‖VΛVᵀ − A‖_F   <= 1e-10·(1 + ‖A‖_F)

#pragma once

#include <optional>
#include <vector>

#include "fimeff/matrix.hpp"

namespace fimeff::spectral {

// Eigenvalues sorted descending (λ_1 >= … >= λ_d), paired with orthonormal
// eigenvector columns: column i of `eigenvectors` belongs to eigenvalues[i].
struct SymmetricSpectrum {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
};

// Full eigendecomposition by cyclic Jacobi rotations. Converges when the
// off-diagonal Frobenius norm drops below 1e-12·‖A‖_F, capped at 100 sweeps.
// Deterministic for a given input. Throws InputError on non-finite entries.
SymmetricSpectrum eigh(const SymMatrix& a);

// V·diag(max(λ_i, floor))^{-1/2}·Vᵀ. With no explicit floor, uses
// 1e-12·max(λ_1, 1), which keeps the whitening map finite on collapsed
// dimensions. Throws NotPsdError when min λ < -1e-10·‖A‖_F.
SymMatrix inv_sqrt(const SymMatrix& a, std::optional<double> floor = std::nullopt);

// Population covariance (1/n)·Σ_b (z_b − m)(z_b − m)ᵀ, with m the batch
// mean when `centered` and the zero vector otherwise.
SymMatrix covariance(const EmbeddingBatch& batch, bool centered);

// λ_1/λ_d for a strictly positive spectrum; +infinity when λ_d <= 0
// (the rank-deficient marker).
double condition_number(const SymmetricSpectrum& spectrum);

} // namespace fimeff::spectral
