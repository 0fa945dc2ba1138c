// fimeff/barlow_twins.cpp

#include "fimeff/barlow_twins.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fimeff/spectral.hpp"

namespace fimeff::barlow {

namespace {

constexpr double kColumnStdTol = 1e-12;

// Centered columns of a batch plus their norms. Throws on a column whose
// standard deviation has collapsed.
struct CenteredView {
    Matrix centered;           // n × d
    std::vector<double> norms; // ‖u_i‖ per column
};

CenteredView center_and_check(const EmbeddingBatch& batch, const char* view_name) {
    const std::size_t n = batch.n();
    const std::size_t d = batch.dim();
    CenteredView view{Matrix(n, d), std::vector<double>(d, 0.0)};

    std::vector<double> mean(d, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
        auto row = batch.row(b);
        for (std::size_t i = 0; i < d; ++i) mean[i] += row[i];
    }
    for (double& m : mean) m /= static_cast<double>(n);

    std::vector<double> sq(d, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
        auto row = batch.row(b);
        for (std::size_t i = 0; i < d; ++i) {
            const double u = row[i] - mean[i];
            view.centered(b, i) = u;
            sq[i] += u * u;
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        const double stddev = std::sqrt(sq[i] / static_cast<double>(n));
        if (stddev <= kColumnStdTol) {
            throw DegenerateColumnError(std::string("cross_correlation: view ") + view_name +
                                            " dimension " + std::to_string(i) +
                                            " has (near-)zero batch variance",
                                        i);
        }
        view.norms[i] = std::sqrt(sq[i]);
    }
    return view;
}

void require_matching_shapes(const EmbeddingBatch& za, const EmbeddingBatch& zb) {
    if (za.n() != zb.n() || za.dim() != zb.dim()) {
        throw InputError("cross_correlation: shape mismatch " + std::to_string(za.n()) + "x" +
                         std::to_string(za.dim()) + " vs " + std::to_string(zb.n()) + "x" +
                         std::to_string(zb.dim()));
    }
}

Matrix normalized_cross_product(const CenteredView& a, const CenteredView& b) {
    Matrix c = a.centered.transposed() * b.centered;
    const std::size_t d = c.rows();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) c(i, j) /= a.norms[i] * b.norms[j];
    return c;
}

} // namespace

AugmentationModel::AugmentationModel(double noise_var_in, std::uint64_t seed_in)
    : noise_var(noise_var_in), seed(seed_in) {
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
        throw InputError("AugmentationModel: noise_var must be positive and finite");
}

LinearEncoder::LinearEncoder(Matrix weights_in, std::vector<double> bias_in)
    : weights(std::move(weights_in)), bias(std::move(bias_in)) {
    if (bias.size() != weights.rows()) {
        throw InputError("LinearEncoder: bias length " + std::to_string(bias.size()) +
                         " vs d_out " + std::to_string(weights.rows()));
    }
    if (!weights.is_finite()) throw InputError("LinearEncoder: non-finite weight");
    for (double b : bias)
        if (!std::isfinite(b)) throw InputError("LinearEncoder: non-finite bias");
}

Matrix LinearEncoder::forward(const Matrix& inputs) const {
    if (inputs.cols() != d_in()) {
        throw InputError("LinearEncoder::forward: input dim " + std::to_string(inputs.cols()) +
                         " vs d_in " + std::to_string(d_in()));
    }
    Matrix z = inputs * weights.transposed();
    for (std::size_t b = 0; b < z.rows(); ++b)
        for (std::size_t i = 0; i < z.cols(); ++i) z(b, i) += bias[i];
    return z;
}

LinearEncoder LinearEncoder::random(std::size_t d_out, std::size_t d_in, std::uint64_t seed) {
    Rng rng(seed);
    Matrix w(d_out, d_in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_in));
    for (std::size_t i = 0; i < d_out; ++i)
        for (std::size_t j = 0; j < d_in; ++j) w(i, j) = scale * rng.gaussian();
    return LinearEncoder(std::move(w), std::vector<double>(d_out, 0.0));
}

LinearEncoder LinearEncoder::zeros(std::size_t d_out, std::size_t d_in) {
    return LinearEncoder(Matrix(d_out, d_in), std::vector<double>(d_out, 0.0));
}

std::pair<EmbeddingBatch, EmbeddingBatch> augment_pair(const EmbeddingBatch& z,
                                                       const AugmentationModel& aug) {
    Rng rng(aug.seed);
    return augment_pair(z, aug.noise_var, rng);
}

std::pair<EmbeddingBatch, EmbeddingBatch> augment_pair(const EmbeddingBatch& z,
                                                       double noise_var, Rng& rng) {
    if (!(noise_var > 0.0)) throw InputError("augment_pair: noise_var must be > 0");
    const double stddev = std::sqrt(noise_var);
    Matrix noisy = z.rows();
    for (std::size_t b = 0; b < noisy.rows(); ++b)
        for (std::size_t i = 0; i < noisy.cols(); ++i) noisy(b, i) += stddev * rng.gaussian();
    return {z, EmbeddingBatch(std::move(noisy))};
}

Matrix cross_correlation(const EmbeddingBatch& za, const EmbeddingBatch& zb) {
    require_matching_shapes(za, zb);
    const CenteredView a = center_and_check(za, "A");
    const CenteredView b = center_and_check(zb, "B");
    return normalized_cross_product(a, b);
}

SymMatrix population_cross_correlation(const SymMatrix& cov_z, double noise_var) {
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
        throw InputError("population_cross_correlation: noise_var must be positive");
    const SymMatrix whitener = spectral::inv_sqrt(cov_z.plus_scaled_identity(noise_var));
    const Matrix w = whitener.to_matrix();
    return SymMatrix::symmetrized(w * cov_z.to_matrix() * w);
}

BtLossBreakdown bt_loss(const Matrix& c, double lambda) {
    if (c.rows() != c.cols()) throw InputError("bt_loss: matrix is not square");
    if (!c.is_finite()) throw InputError("bt_loss: non-finite entry");
    if (!(lambda > 0.0)) throw InputError("bt_loss: lambda must be > 0");

    BtLossBreakdown breakdown;
    breakdown.lambda = lambda;
    const std::size_t d = c.rows();
    for (std::size_t i = 0; i < d; ++i) {
        const double gap = 1.0 - c(i, i);
        breakdown.invariance += gap * gap;
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) breakdown.redundancy += c(i, j) * c(i, j);
    }
    breakdown.total = breakdown.invariance + lambda * breakdown.redundancy;
    return breakdown;
}

Matrix bt_loss_grad_wrt_C(const Matrix& c, double lambda) {
    if (c.rows() != c.cols()) throw InputError("bt_loss_grad_wrt_C: matrix is not square");
    const std::size_t d = c.rows();
    Matrix grad(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            grad(i, j) = (i == j) ? -2.0 * (1.0 - c(i, i)) : 2.0 * lambda * c(i, j);
    return grad;
}

std::pair<Matrix, Matrix> bt_loss_grad_wrt_batches(const EmbeddingBatch& za,
                                                   const EmbeddingBatch& zb,
                                                   double lambda) {
    require_matching_shapes(za, zb);
    const CenteredView a = center_and_check(za, "A");
    const CenteredView b = center_and_check(zb, "B");
    const Matrix c = normalized_cross_product(a, b);
    const Matrix g = bt_loss_grad_wrt_C(c, lambda);
    const std::size_t d = c.rows();

    Matrix w(d, d);
    std::vector<double> t(d, 0.0), r(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            w(i, j) = g(i, j) / (a.norms[i] * b.norms[j]);
            const double gc = g(i, j) * c(i, j);
            t[i] += gc;
            r[j] += gc;
        }
    }
    for (std::size_t i = 0; i < d; ++i) t[i] /= a.norms[i] * a.norms[i];
    for (std::size_t j = 0; j < d; ++j) r[j] /= b.norms[j] * b.norms[j];

    Matrix grad_a = b.centered * w.transposed();
    Matrix grad_b = a.centered * w;
    const std::size_t n = za.n();
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t i = 0; i < d; ++i) {
            grad_a(row, i) -= a.centered(row, i) * t[i];
            grad_b(row, i) -= b.centered(row, i) * r[i];
        }
    }
    return {std::move(grad_a), std::move(grad_b)};
}

} // namespace fimeff::barlow
