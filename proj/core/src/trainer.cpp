// fimeff/trainer.cpp

#include "fimeff/trainer.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "fimeff/fim_geometry.hpp"
#include "fimeff/sampling.hpp"
#include "fimeff/spectral.hpp"

namespace fimeff::barlow {

namespace {

constexpr double kDivergenceFactor = 10.0;
constexpr std::size_t kDivergencePatience = 100;

void validate_config(const SymMatrix& data_cov, const LinearEncoder& encoder,
                     const TrainConfig& cfg) {
    if (encoder.d_in() != data_cov.dim()) {
        throw InputError("train_toy: encoder d_in " + std::to_string(encoder.d_in()) +
                         " does not match data covariance dim " +
                         std::to_string(data_cov.dim()));
    }
    if (cfg.steps < 1) throw InputError("train_toy: steps must be >= 1");
    if (!(cfg.lr > 0.0)) throw InputError("train_toy: lr must be > 0");
    if (!(cfg.lambda > 0.0)) throw InputError("train_toy: lambda must be > 0");
    if (cfg.batch_n < 2 * encoder.d_out()) {
        throw InputError("train_toy: batch_n must be >= 2*d_out (" +
                         std::to_string(2 * encoder.d_out()) + "), got " +
                         std::to_string(cfg.batch_n));
    }
    if (!(cfg.report_eps > 0.0) || !(cfg.report_eps < 1.0))
        throw InputError("train_toy: report_eps must lie in (0, 1)");
}

} // namespace

TrainResult train_toy(const SymMatrix& data_cov, const LinearEncoder& encoder_init,
                      const AugmentationModel& aug, const TrainConfig& cfg) {
    validate_config(data_cov, encoder_init, cfg);

    const GaussianSampler sampler(data_cov);
    Rng data_rng(cfg.seed);
    Rng noise_rng(aug.seed);
    const geometry::GaussianModelConfig model_cfg(cfg.sigma_sq, cfg.lipschitz,
                                                  encoder_init.d_out());

    LinearEncoder encoder = encoder_init;
    TrainingTrace trace;
    trace.steps.reserve(cfg.steps);

    double initial_total = 0.0;
    std::size_t over_budget_streak = 0;

    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        const Matrix inputs = sampler.draw_matrix(data_rng, cfg.batch_n);
        Matrix z = encoder.forward(inputs);
        if (!z.is_finite()) {
            throw DivergenceError("train_toy: non-finite representations at step " +
                                  std::to_string(step));
        }

        EmbeddingBatch batch_a{std::move(z)};
        auto [view_a, view_b] = augment_pair(batch_a, aug.noise_var, noise_rng);

        const Matrix c = cross_correlation(view_a, view_b);
        const BtLossBreakdown loss = bt_loss(c, cfg.lambda);
        if (!std::isfinite(loss.total)) {
            throw DivergenceError("train_toy: non-finite loss at step " +
                                  std::to_string(step));
        }

        TrainStepRecord record;
        record.step = step;
        record.invariance = loss.invariance;
        record.redundancy = loss.redundancy;
        record.total = loss.total;
        record.offdiag_mass = loss.redundancy;
        for (std::size_t i = 0; i < c.rows(); ++i)
            record.diag_gap = std::max(record.diag_gap, std::abs(1.0 - c(i, i)));
        const SymMatrix batch_cov = spectral::covariance(view_a, /*centered=*/true);
        record.eta =
            geometry::build_report(batch_cov, model_cfg, cfg.report_eps).eta;
        trace.steps.push_back(record);

        if (step == 1) {
            initial_total = loss.total;
        } else if (loss.total > kDivergenceFactor * initial_total) {
            if (++over_budget_streak >= kDivergencePatience) {
                throw DivergenceError(
                    "train_toy: loss exceeded 10x its initial value (" +
                    std::to_string(initial_total) + ") for " +
                    std::to_string(kDivergencePatience) + " consecutive steps");
            }
        } else {
            over_budget_streak = 0;
        }

        auto [grad_a, grad_b] = bt_loss_grad_wrt_batches(view_a, view_b, cfg.lambda);
        const Matrix grad_z = grad_a + grad_b;       // Z^B = Z^A + const noise
        const Matrix grad_w = grad_z.transposed() * inputs;
        for (std::size_t i = 0; i < encoder.d_out(); ++i) {
            for (std::size_t j = 0; j < encoder.d_in(); ++j)
                encoder.weights(i, j) -= cfg.lr * grad_w(i, j);
            double column_sum = 0.0;
            for (std::size_t b = 0; b < cfg.batch_n; ++b) column_sum += grad_z(b, i);
            encoder.bias[i] -= cfg.lr * column_sum;
        }
    }
    return TrainResult{std::move(encoder), std::move(trace)};
}

} // namespace fimeff::barlow
