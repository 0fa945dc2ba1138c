// fimeff/sampling.hpp — seeded Gaussian sampling with a prescribed covariance.

#pragma once

#include "fimeff/matrix.hpp"
#include "fimeff/rng.hpp"
#include "fimeff/spectral.hpp"

namespace fimeff {

// Random orthogonal matrix: modified Gram–Schmidt applied to a seeded
// Gaussian matrix (thin QR). Deterministic per generator state.
Matrix random_orthogonal(std::size_t dim, Rng& rng);

// Draws x ~ N(0, cov) through the spectral factor F = V·diag(√max(λ,0)),
// so Cov(Fg) = cov for g ~ N(0, I). Rank-deficient covariances are legal;
// collapsed directions simply carry no noise.
class GaussianSampler {
public:
    explicit GaussianSampler(const SymMatrix& cov);

    std::size_t dim() const noexcept { return factor_.rows(); }

    // One draw appended into `out` (length dim).
    void draw(Rng& rng, std::span<double> out) const;

    // n draws as batch rows.
    Matrix draw_matrix(Rng& rng, std::size_t n) const;

private:
    Matrix factor_;
};

} // namespace fimeff
