// fimeff/sampling.cpp

#include "fimeff/sampling.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fimeff {

Matrix random_orthogonal(std::size_t dim, Rng& rng) {
    Matrix q(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) q(i, j) = rng.gaussian();

    // Modified Gram–Schmidt over columns, with one re-orthogonalization
    // pass; a random Gaussian matrix is full rank with probability 1, so
    // the near-zero-norm fallback below is essentially never taken.
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += q(i, k) * q(i, j);
                for (std::size_t i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) norm += q(i, j) * q(i, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12) {
            for (std::size_t i = 0; i < dim; ++i) q(i, j) = (i == j) ? 1.0 : 0.0;
            norm = 1.0;
        }
        for (std::size_t i = 0; i < dim; ++i) q(i, j) /= norm;
    }
    return q;
}

GaussianSampler::GaussianSampler(const SymMatrix& cov) : factor_(cov.dim(), cov.dim()) {
    const spectral::SymmetricSpectrum spectrum = spectral::eigh(cov);
    const double psd_slack = 1e-10 * cov.frobenius_norm();
    if (spectrum.eigenvalues.back() < -psd_slack) {
        throw NotPsdError("GaussianSampler: covariance is not PSD (min eigenvalue " +
                          std::to_string(spectrum.eigenvalues.back()) + ")");
    }
    const std::size_t d = cov.dim();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double scale = std::sqrt(std::max(spectrum.eigenvalues[j], 0.0));
            factor_(i, j) = spectrum.eigenvectors(i, j) * scale;
        }
    }
}

void GaussianSampler::draw(Rng& rng, std::span<double> out) const {
    const std::size_t d = dim();
    if (out.size() != d) throw InputError("GaussianSampler::draw: output span size mismatch");
    std::vector<double> g(d);
    for (double& v : g) v = rng.gaussian();
    for (std::size_t i = 0; i < d; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) sum += factor_(i, j) * g[j];
        out[i] = sum;
    }
}

Matrix GaussianSampler::draw_matrix(Rng& rng, std::size_t n) const {
    Matrix out(n, dim());
    for (std::size_t b = 0; b < n; ++b) draw(rng, out.row(b));
    return out;
}

} // namespace fimeff
