// fimeff/trainer.hpp — toy Barlow Twins trainer for a linear encoder on
// synthetic Gaussian data. Plain gradient descent at a fixed learning rate;
// the point is to reach the loss optimum (C = I) and record the path, not
// to model a production optimizer.

#pragma once

#include <cstdint>
#include <vector>

#include "fimeff/barlow_twins.hpp"
#include "fimeff/matrix.hpp"

namespace fimeff::barlow {

struct TrainStepRecord {
    std::size_t step = 0;       // 1-based, strictly increasing
    double invariance = 0.0;
    double redundancy = 0.0;
    double total = 0.0;
    double offdiag_mass = 0.0;  // Σ_{i≠j} C_ij² of this step's batch estimate
    double diag_gap = 0.0;      // max_i |1 − C_ii|
    double eta = 0.0;           // efficiency of this step's batch covariance
};

struct TrainingTrace {
    std::vector<TrainStepRecord> steps;
};

struct TrainConfig {
    double lambda = 0.005;
    double lr = 0.05;
    std::size_t steps = 3000;
    std::size_t batch_n = 512;
    double report_eps = 0.05;
    // Gaussian-model parameters used only for the per-step η readout.
    double sigma_sq = 1.0;
    double lipschitz = 1.0;
    std::uint64_t seed = 1;
};

struct TrainResult {
    LinearEncoder encoder;
    TrainingTrace trace;
};

// Each step draws x ~ N(0, data_cov), forms Z^A = encoder(X), adds
// representation-space noise for Z^B, and descends the analytic gradient
// of the Barlow Twins loss chained through the linear map. Aborts with
// DivergenceError when the total loss exceeds 10× its initial value for
// 100 consecutive steps (or turns non-finite).
//
// Deterministic per (cfg.seed, aug.seed); the data stream and the noise
// stream are independent generators.
TrainResult train_toy(const SymMatrix& data_cov, const LinearEncoder& encoder_init,
                      const AugmentationModel& aug, const TrainConfig& cfg);

} // namespace fimeff::barlow
