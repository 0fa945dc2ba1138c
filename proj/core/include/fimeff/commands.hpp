// fimeff/commands.hpp — the four CLI operations as library functions, so
// they can be exercised in-process by tests as well as by the binary.
//
// Exit-code contract implemented by the binary on top of these:
//   0 success / all validators passed
//   1 validation failure
//   2 usage error (UsageError, bad flags)
//   3 input or parse error (InputError, ParseError, collapse diagnostics)
//   4 numerical divergence (DivergenceError)

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fimeff/embedding_file.hpp"
#include "fimeff/report_document.hpp"
#include "fimeff/theory_lab.hpp"
#include "fimeff/trainer.hpp"

namespace fimeff::io {

struct AnalyzeOptions {
    std::string input;
    EmbeddingFormat format = EmbeddingFormat::csv;
    double epsilon = 0.05;
    double sigma_sq = 1.0;
    double lipschitz = 1.0;
    double lambda = 0.005;
    std::optional<double> noise_var; // enables the population-correlation section
    std::optional<std::string> out;
};

// covariance → efficiency report; with noise_var also the population
// cross-correlation of the estimated covariance and its Barlow Twins loss.
ReportDocument cmd_analyze(const AnalyzeOptions& opts);

struct TrainOptions {
    std::size_t d_in = theory::defaults::kTrainDimIn;
    std::size_t d_out = theory::defaults::kTrainDimOut;
    double lambda = 0.005;
    double lr = 0.05;
    std::size_t steps = 3000;
    std::size_t batch_n = 512;
    double epsilon = 0.05;
    double noise_var = theory::defaults::kTrainNoiseVar;
    double sigma_sq = 1.0;
    double lipschitz = 1.0;
    std::uint64_t seed = 1;
    std::string trace_out = "trace.csv";
    std::optional<std::string> out;
};

// Trains on N(0, I_{d_in}) data, writes the per-step trace CSV (columns:
// step,invariance,redundancy,total,offdiag_mass,diag_gap,eta) and returns
// the final report.
ReportDocument cmd_train(const TrainOptions& opts);

struct ValidateOptions {
    std::string claim = "all"; // lemma1|lemma3|lemma4|theorem1|theorem2|prop1|all
    // Overrides for the validator defaults; --batch-n doubles as the Monte
    // Carlo sample count for lemma1/lemma3.
    std::optional<std::size_t> samples;
    std::optional<double> sigma_sq;
    std::optional<double> noise_var;
    std::optional<double> lipschitz;
    std::optional<double> epsilon;
    std::optional<double> lambda;
    std::optional<double> lr;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> d_in;
    std::optional<std::size_t> d_out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

struct ValidateOutcome {
    ReportDocument document;
    bool all_passed = false;
};

ValidateOutcome cmd_validate(const ValidateOptions& opts);

struct LossOptions {
    std::string input_a;
    std::string input_b;
    EmbeddingFormat format = EmbeddingFormat::csv;
    double lambda = 0.005;
    std::optional<std::string> out;
};

// cross_correlation of the two files, then the loss breakdown; the full C
// is included in the document.
ReportDocument cmd_loss(const LossOptions& opts);

// Helpers shared with tests.
void write_trace_csv(const std::string& path, const barlow::TrainingTrace& trace);
void append_validation(ReportDocument& doc, const theory::ValidationResult& result);
void write_document(const std::string& path, const ReportDocument& doc);

} // namespace fimeff::io
