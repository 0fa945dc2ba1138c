// fimeff/fim_geometry.hpp — Fisher-information geometry of a representation
// space under the isotropic Gaussian observation model p(t|z) = N(t; z, σ²I).
//
// The quantities here are:
//   local_fim             G(z) = (1/σ²)·I_d, constant over the manifold
//   average_fim           Ḡ    = mean of per-sample FIMs
//   fim_spectrum_from_cov λ_i  = (1/σ²)·ν_i/(ν_i + σ²L²), the leading-order
//                         map from covariance eigenvalues ν to FIM
//                         eigenvalues λ for an L-Lipschitz encoder
//   effective_dimension   d_eff(ε), dominant-component count of a spectrum
//   efficiency            η = d_eff/d, 1 meaning every dimension carries
//                         equal information
//   build_report          one-shot composition from a covariance matrix

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fimeff/matrix.hpp"

namespace fimeff::geometry {

struct GaussianModelConfig {
    double sigma_sq;  // σ² > 0, observation-noise variance
    double lipschitz; // L > 0, encoder Lipschitz constant
    std::size_t dim;  // d >= 1

    GaussianModelConfig(double sigma_sq, double lipschitz, std::size_t dim);
};

struct EfficiencyReport {
    std::vector<double> cov_eigenvalues; // ν_i, descending
    std::vector<double> fim_eigenvalues; // λ_i, descending
    double epsilon = 0.0;
    std::size_t d_eff = 0;
    double eta = 0.0;                 // d_eff / d, in (0, 1]
    double condition_number = 0.0;    // of the λ spectrum; +inf when rank deficient
    std::optional<double> offdiag_mass; // Σ_{i≠j} C_ij² when a correlation was supplied
};

inline constexpr double kDefaultEpsilon = 0.05;

SymMatrix local_fim(const GaussianModelConfig& cfg);

// Entrywise arithmetic mean; Monte Carlo realization of E[G(f(x))].
SymMatrix average_fim(std::span<const SymMatrix> samples);

// Elementwise spectral map, order preserving (strictly increasing in ν).
// Tiny negatives (>= -1e-12) are clamped to zero; anything more negative
// is an input error.
std::vector<double> fim_spectrum_from_cov(std::span<const double> nu,
                                          const GaussianModelConfig& cfg);

// Smallest k whose top-k mass reaches a 1−ε fraction of the total, under
// the convention that a cut never separates tied eigenvalues (equal values
// are indistinguishable components; in particular an all-equal spectrum has
// d_eff = d for every ε). Requires a descending nonnegative spectrum with
// positive total mass and ε in (0, 1).
std::size_t effective_dimension(std::span<const double> lambda, double epsilon);

// effective_dimension(λ, ε) / d; requires d == λ.size().
double efficiency(std::span<const double> lambda, double epsilon, std::size_t d);

// Eigendecomposes `cov`, maps its spectrum, and assembles the full report.
// Eigenvalues below 1e-12·ν_1 are treated as exact zeros so that exact
// linear dependence in the data reports as rank deficiency. An all-zero
// covariance raises DegenerateSpectrumError.
EfficiencyReport build_report(const SymMatrix& cov, const GaussianModelConfig& cfg,
                              double epsilon,
                              const Matrix* correlation = nullptr);

} // namespace fimeff::geometry
