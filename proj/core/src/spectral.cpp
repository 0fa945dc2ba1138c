// fimeff/spectral.cpp

#include "fimeff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fimeff::spectral {

namespace {

constexpr double kOffDiagRelTol = 1e-12;
constexpr int kMaxSweeps = 100;

double offdiag_norm(const Matrix& m) {
    const std::size_t d = m.rows();
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < d; ++p)
        for (std::size_t q = p + 1; q < d; ++q) sum += 2.0 * m(p, q) * m(p, q);
    return std::sqrt(sum);
}

// One Jacobi rotation zeroing work(p,q); accumulates V <- V·J. Uses the
// smaller root of t² + 2τt − 1 = 0 so |t| <= 1 (numerically stable choice).
void rotate(Matrix& work, Matrix& vectors, std::size_t p, std::size_t q) {
    const double apq = work(p, q);
    const double tau = (work(q, q) - work(p, p)) / (2.0 * apq);
    double t;
    if (tau >= 0.0) {
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    } else {
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t d = work.rows();
    const double app = work(p, p);
    const double aqq = work(q, q);
    work(p, p) = app - t * apq;
    work(q, q) = aqq + t * apq;
    work(p, q) = 0.0;
    work(q, p) = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        if (k == p || k == q) continue;
        const double akp = work(k, p);
        const double akq = work(k, q);
        work(k, p) = c * akp - s * akq;
        work(p, k) = work(k, p);
        work(k, q) = s * akp + c * akq;
        work(q, k) = work(k, q);
    }
    for (std::size_t k = 0; k < d; ++k) {
        const double vkp = vectors(k, p);
        const double vkq = vectors(k, q);
        vectors(k, p) = c * vkp - s * vkq;
        vectors(k, q) = s * vkp + c * vkq;
    }
}

} // namespace

SymmetricSpectrum eigh(const SymMatrix& a) {
    if (!a.is_finite()) throw InputError("eigh: matrix has non-finite entries");

    const std::size_t d = a.dim();
    Matrix work = a.to_matrix();
    Matrix vectors = Matrix::identity(d);

    const double tol = kOffDiagRelTol * a.frobenius_norm();
    for (int sweep = 0; sweep < kMaxSweeps && d > 1; ++sweep) {
        if (offdiag_norm(work) <= tol) break;
        for (std::size_t p = 0; p + 1 < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q)
                if (work(p, q) != 0.0) rotate(work, vectors, p, q);
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return work(i, i) > work(j, j); });

    SymmetricSpectrum spectrum{std::vector<double>(d), Matrix(d, d)};
    for (std::size_t j = 0; j < d; ++j) {
        spectrum.eigenvalues[j] = work(order[j], order[j]);
        for (std::size_t i = 0; i < d; ++i)
            spectrum.eigenvectors(i, j) = vectors(i, order[j]);
    }
    return spectrum;
}

SymMatrix inv_sqrt(const SymMatrix& a, std::optional<double> floor) {
    const SymmetricSpectrum spectrum = eigh(a);
    const double min_eigenvalue = spectrum.eigenvalues.back();
    const double psd_slack = 1e-10 * a.frobenius_norm();
    if (min_eigenvalue < -psd_slack) {
        throw NotPsdError("inv_sqrt: matrix is not PSD (min eigenvalue " +
                          std::to_string(min_eigenvalue) + " < -" +
                          std::to_string(psd_slack) + ")");
    }

    const double lambda_max = spectrum.eigenvalues.front();
    const double effective_floor = floor ? *floor : 1e-12 * std::max(lambda_max, 1.0);
    if (!(effective_floor > 0.0)) throw InputError("inv_sqrt: floor must be > 0");

    const std::size_t d = a.dim();
    std::vector<double> weights(d);
    for (std::size_t i = 0; i < d; ++i)
        weights[i] = 1.0 / std::sqrt(std::max(spectrum.eigenvalues[i], effective_floor));

    // B = V diag(w) Vᵀ, filled on the upper triangle and mirrored.
    SymMatrix out(d);
    const Matrix& v = spectrum.eigenvectors;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < d; ++k) sum += v(i, k) * weights[k] * v(j, k);
            out.set(i, j, sum);
        }
    }
    return out;
}

SymMatrix covariance(const EmbeddingBatch& batch, bool centered) {
    const std::size_t n = batch.n();
    const std::size_t d = batch.dim();
    if (n < 2) throw InputError("covariance: need n >= 2");

    std::vector<double> mean(d, 0.0);
    if (centered) {
        for (std::size_t b = 0; b < n; ++b) {
            auto row = batch.row(b);
            for (std::size_t i = 0; i < d; ++i) mean[i] += row[i];
        }
        for (double& m : mean) m /= static_cast<double>(n);
    }

    SymMatrix cov(d);
    std::vector<double> deviation(d);
    std::vector<double> accum(d * d, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
        auto row = batch.row(b);
        for (std::size_t i = 0; i < d; ++i) deviation[i] = row[i] - mean[i];
        for (std::size_t i = 0; i < d; ++i) {
            const double di = deviation[i];
            for (std::size_t j = i; j < d; ++j) accum[i * d + j] += di * deviation[j];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) cov.set(i, j, accum[i * d + j] * inv_n);
    return cov;
}

double condition_number(const SymmetricSpectrum& spectrum) {
    if (spectrum.eigenvalues.empty()) throw InputError("condition_number: empty spectrum");
    const double lambda_min = spectrum.eigenvalues.back();
    if (lambda_min <= 0.0) return std::numeric_limits<double>::infinity();
    return spectrum.eigenvalues.front() / lambda_min;
}

} // namespace fimeff::spectral
