// fimeff/fim_geometry.cpp

#include "fimeff/fim_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fimeff/spectral.hpp"

namespace fimeff::geometry {

namespace {

// Relative gap below which neighboring eigenvalues count as tied.
constexpr double kTieRelTol = 1e-12;

// Relative floor below which a covariance eigenvalue is treated as zero.
constexpr double kRankRelTol = 1e-12;

} // namespace

GaussianModelConfig::GaussianModelConfig(double sigma_sq_in, double lipschitz_in,
                                         std::size_t dim_in)
    : sigma_sq(sigma_sq_in), lipschitz(lipschitz_in), dim(dim_in) {
    if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq))
        throw InputError("GaussianModelConfig: sigma_sq must be positive and finite");
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz))
        throw InputError("GaussianModelConfig: lipschitz must be positive and finite");
    if (dim < 1) throw InputError("GaussianModelConfig: dim must be >= 1");
}

SymMatrix local_fim(const GaussianModelConfig& cfg) {
    return SymMatrix::identity(cfg.dim).scaled(1.0 / cfg.sigma_sq);
}

SymMatrix average_fim(std::span<const SymMatrix> samples) {
    if (samples.empty()) throw InputError("average_fim: empty sample list");
    const std::size_t d = samples.front().dim();
    SymMatrix sum(d);
    for (const SymMatrix& g : samples) {
        if (g.dim() != d) {
            throw InputError("average_fim: dim mismatch, " + std::to_string(g.dim()) +
                             " vs " + std::to_string(d));
        }
        sum = sum + g;
    }
    return sum.scaled(1.0 / static_cast<double>(samples.size()));
}

std::vector<double> fim_spectrum_from_cov(std::span<const double> nu,
                                          const GaussianModelConfig& cfg) {
    const double damping = cfg.sigma_sq * cfg.lipschitz * cfg.lipschitz; // σ²L²
    const double scale = 1.0 / cfg.sigma_sq;
    std::vector<double> lambda;
    lambda.reserve(nu.size());
    for (double value : nu) {
        if (value < -1e-12) {
            throw InputError("fim_spectrum_from_cov: negative eigenvalue " +
                             std::to_string(value));
        }
        const double v = std::max(value, 0.0);
        lambda.push_back(v == 0.0 ? 0.0 : scale * (v / (v + damping)));
    }
    return lambda;
}

std::size_t effective_dimension(std::span<const double> lambda, double epsilon) {
    if (lambda.empty()) throw InputError("effective_dimension: empty spectrum");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw InputError("effective_dimension: epsilon must lie in (0, 1)");

    double total = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0.0)
            throw InputError("effective_dimension: negative eigenvalue");
        if (i > 0 && lambda[i] > lambda[i - 1])
            throw InputError("effective_dimension: spectrum not sorted descending");
        total += lambda[i];
    }
    if (total <= 0.0)
        throw DegenerateSpectrumError("effective_dimension: all-zero spectrum");

    const double threshold = (1.0 - epsilon) * total;
    const double tie_tol = kTieRelTol * lambda.front();
    const std::size_t d = lambda.size();

    double cumulative = 0.0;
    for (std::size_t k = 1; k <= d; ++k) {
        cumulative += lambda[k - 1];
        const bool mass_reached = cumulative >= threshold;
        const bool splits_tie = k < d && (lambda[k - 1] - lambda[k]) <= tie_tol;
        if (mass_reached && !splits_tie) return k;
    }
    return d;
}

double efficiency(std::span<const double> lambda, double epsilon, std::size_t d) {
    if (d != lambda.size()) {
        throw InputError("efficiency: d = " + std::to_string(d) +
                         " does not match spectrum length " + std::to_string(lambda.size()));
    }
    return static_cast<double>(effective_dimension(lambda, epsilon)) /
           static_cast<double>(d);
}

EfficiencyReport build_report(const SymMatrix& cov, const GaussianModelConfig& cfg,
                              double epsilon, const Matrix* correlation) {
    if (cov.dim() != cfg.dim) {
        throw InputError("build_report: covariance dim " + std::to_string(cov.dim()) +
                         " does not match config dim " + std::to_string(cfg.dim));
    }

    const spectral::SymmetricSpectrum spectrum = spectral::eigh(cov);
    const double psd_slack = 1e-10 * cov.frobenius_norm();
    if (spectrum.eigenvalues.back() < -psd_slack) {
        throw NotPsdError("build_report: covariance is not PSD (min eigenvalue " +
                          std::to_string(spectrum.eigenvalues.back()) + ")");
    }

    EfficiencyReport report;
    report.epsilon = epsilon;
    report.cov_eigenvalues = spectrum.eigenvalues;
    const double rank_floor = kRankRelTol * std::max(spectrum.eigenvalues.front(), 0.0);
    for (double& nu : report.cov_eigenvalues)
        if (nu < rank_floor) nu = 0.0;
    if (report.cov_eigenvalues.front() <= 0.0)
        throw DegenerateSpectrumError("build_report: zero covariance (all dimensions collapsed)");

    report.fim_eigenvalues = fim_spectrum_from_cov(report.cov_eigenvalues, cfg);
    report.d_eff = effective_dimension(report.fim_eigenvalues, epsilon);
    report.eta = static_cast<double>(report.d_eff) / static_cast<double>(cfg.dim);

    const double lambda_min = report.fim_eigenvalues.back();
    report.condition_number = lambda_min > 0.0
        ? report.fim_eigenvalues.front() / lambda_min
        : std::numeric_limits<double>::infinity();

    if (correlation != nullptr) {
        if (correlation->rows() != cfg.dim || correlation->cols() != cfg.dim) {
            throw InputError("build_report: correlation matrix shape mismatch");
        }
        double mass = 0.0;
        for (std::size_t i = 0; i < cfg.dim; ++i)
            for (std::size_t j = 0; j < cfg.dim; ++j)
                if (i != j) mass += (*correlation)(i, j) * (*correlation)(i, j);
        report.offdiag_mass = mass;
    }
    return report;
}

} // namespace fimeff::geometry
