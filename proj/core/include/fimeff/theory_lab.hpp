// fimeff/theory_lab.hpp — Monte Carlo and algebraic validators for the
// framework's closed-form claims, each reporting measured deviations
// against explicit tolerances.
//
// Statistical tolerances follow the 5/√n rule: a per-entry mean of n
// O(1)-variance samples stays within five standard errors except with
// ~1e-6 probability, so validators are reproducible pass/fail evidence
// rather than flaky hypothesis tests.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fimeff/barlow_twins.hpp"
#include "fimeff/fim_geometry.hpp"
#include "fimeff/matrix.hpp"
#include "fimeff/trainer.hpp"

namespace fimeff::theory {

// Pass/fail evidence for one claim. `passed` is derived, never set by
// hand: it is true iff every measured deviation is within its named
// tolerance. Report-only values carry an infinite tolerance.
struct ValidationResult {
    std::string name;
    bool passed = false;
    std::map<std::string, double> measured;
    std::map<std::string, double> tolerance;
    std::map<std::string, double> config;

    // Computes `passed` from the maps; every measured key must have a
    // tolerance entry.
    void finalize();
};

// Synthetic covariance Σ_z = Q·diag(ν)·Qᵀ with Q a seeded random rotation;
// rotation_seed 0 pins Q = I so diagonal covariances stay exactly diagonal.
struct SyntheticSpec {
    std::size_t dim = 0;
    std::vector<double> cov_eigenvalues;
    std::uint64_t rotation_seed = 0;
    std::size_t sample_count = 0;

    SyntheticSpec(std::size_t dim, std::vector<double> cov_eigenvalues,
                  std::uint64_t rotation_seed, std::size_t sample_count);
};

// The spec's covariance as an explicit matrix.
SymMatrix synthetic_covariance(const SyntheticSpec& spec);

// n samples from N(0, Q·diag(ν)·Qᵀ); deterministic per (spec, seed).
EmbeddingBatch generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// G(z) = (1/σ²)I via the score identity: draws t ~ N(z, σ²I) and averages
// (1/σ⁴)(t−z)(t−z)ᵀ. Requires mc_samples >= 10⁴.
ValidationResult validate_lemma1(const geometry::GaussianModelConfig& cfg,
                                 std::size_t mc_samples, std::uint64_t seed);

// Whitened-view cross-correlation against the closed form
// (Σ_z+σ_ε²I)^{-1/2} Σ_z (Σ_z+σ_ε²I)^{-1/2}. Requires sample_count >= 10⁴.
ValidationResult validate_lemma3(const SyntheticSpec& spec, double noise_var,
                                 std::uint64_t seed);

// Forward direction: Σ_z = νI gives a perfectly isotropic C. Converse as
// an algebraic bound: per-entry C_ii >= 1−δ forces ν >= σ_ε²(1−δ)/δ,
// reported as `implied_nu_lower_bound`.
ValidationResult validate_lemma4(double nu_equal, double noise_var, std::size_t dim,
                                 double delta = 0.01);

// Equal covariance eigenvalues map to an exactly equal FIM spectrum
// (relative spread <= 1e-12, condition number 1). Requires equal ν.
ValidationResult validate_theorem1(const SyntheticSpec& spec,
                                   const geometry::GaussianModelConfig& cfg,
                                   double noise_var);

// Post-training evaluation on a fresh batch: the efficiency report of the
// representation covariance plus the Barlow Twins statistics of an
// augmented evaluation pair.
struct EncoderEvaluation {
    geometry::EfficiencyReport report;
    double offdiag_mass = 0.0;
    double diag_gap = 0.0;
};

EncoderEvaluation evaluate_encoder(const barlow::LinearEncoder& encoder,
                                   const SymMatrix& data_cov,
                                   const barlow::AugmentationModel& aug,
                                   std::size_t eval_n, double epsilon,
                                   double sigma_sq, double lipschitz,
                                   std::uint64_t eval_seed);

// Trains with train_toy and checks the Theorem-2 pass bar on a fresh
// evaluation batch: η == 1 at ε, off-diagonal mass < 0.05, diagonal gap
// < 0.1. Divergence during training propagates as DivergenceError.
ValidationResult validate_theorem2(const SymMatrix& data_cov,
                                   const barlow::LinearEncoder& encoder_init,
                                   const barlow::AugmentationModel& aug,
                                   const barlow::TrainConfig& cfg,
                                   std::size_t eval_n, double epsilon);

// One result per (ν-profile, σ², L) combination: spectral-map order
// preservation, the 1/σ² upper bound, and both efficiencies (from ν and
// from the mapped λ) as report-only values.
std::vector<ValidationResult> sweep_spectrum_map(
    const std::vector<std::vector<double>>& nu_profiles,
    const std::vector<std::pair<double, double>>& sigma_sq_lipschitz_grid,
    double epsilon);

// Default configurations for the CLI / CI runs; every validator passes on
// these at its stated tolerance.
namespace defaults {
inline constexpr double kSigmaSq = 1.0;
inline constexpr double kLipschitz = 1.0;
inline constexpr double kNoiseVar = 1.0;
inline constexpr double kEpsilon = 0.05;
inline constexpr std::size_t kMcSamples = 100000;
inline constexpr std::uint64_t kSeed = 42;

inline constexpr double kTrainNoiseVar = 0.05;
inline constexpr std::size_t kTrainDimIn = 8;
inline constexpr std::size_t kTrainDimOut = 4;
inline constexpr std::size_t kEvalSamples = 4096;
} // namespace defaults

} // namespace fimeff::theory
