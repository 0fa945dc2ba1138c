// fimeff/commands.cpp

#include "fimeff/commands.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "fimeff/sampling.hpp"
#include "fimeff/spectral.hpp"

namespace fimeff::io {

namespace {

constexpr std::uint64_t kEncoderInitStream = 0x494E4954; // "INIT"

void append_efficiency_report(ReportDocument& doc, const std::string& prefix,
                              const geometry::EfficiencyReport& report) {
    doc.add_real(prefix + ".epsilon", report.epsilon);
    doc.add_int(prefix + ".d_eff", static_cast<std::int64_t>(report.d_eff));
    doc.add_real(prefix + ".eta", report.eta);
    doc.add_real(prefix + ".condition_number", report.condition_number);
    if (report.offdiag_mass) doc.add_real(prefix + ".offdiag_mass", *report.offdiag_mass);
    for (std::size_t i = 0; i < report.cov_eigenvalues.size(); ++i)
        doc.add_real(prefix + ".cov_eigenvalues." + std::to_string(i),
                     report.cov_eigenvalues[i]);
    for (std::size_t i = 0; i < report.fim_eigenvalues.size(); ++i)
        doc.add_real(prefix + ".fim_eigenvalues." + std::to_string(i),
                     report.fim_eigenvalues[i]);
}

void append_loss(ReportDocument& doc, const std::string& prefix,
                 const barlow::BtLossBreakdown& loss) {
    doc.add_real(prefix + ".invariance", loss.invariance);
    doc.add_real(prefix + ".redundancy", loss.redundancy);
    doc.add_real(prefix + ".lambda", loss.lambda);
    doc.add_real(prefix + ".total", loss.total);
}

void append_matrix(ReportDocument& doc, const std::string& prefix, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            doc.add_real(prefix + "." + std::to_string(i) + "." + std::to_string(j),
                         m(i, j));
}

ReportDocument new_document(const std::string& command) {
    ReportDocument doc;
    doc.add_string("schema_version", "1");
    doc.add_string("command", command);
    return doc;
}

void maybe_write(const std::optional<std::string>& path, const ReportDocument& doc) {
    if (path) write_document(*path, doc);
}

// Zero-variance dimensions of a covariance, for collapse diagnostics.
std::string null_dimension_list(const SymMatrix& cov) {
    std::string dims;
    for (std::size_t i = 0; i < cov.dim(); ++i) {
        if (cov(i, i) <= 0.0) {
            if (!dims.empty()) dims += ",";
            dims += std::to_string(i);
        }
    }
    return dims;
}

} // namespace

void write_document(const std::string& path, const ReportDocument& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open file for writing: " + path);
    const std::string text = doc.serialize();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw InputError("write failed: " + path);
}

void write_trace_csv(const std::string& path, const barlow::TrainingTrace& trace) {
    std::string out = "step,invariance,redundancy,total,offdiag_mass,diag_gap,eta\n";
    for (const auto& row : trace.steps) {
        out += std::to_string(row.step);
        out += ',';
        out += format_real(row.invariance);
        out += ',';
        out += format_real(row.redundancy);
        out += ',';
        out += format_real(row.total);
        out += ',';
        out += format_real(row.offdiag_mass);
        out += ',';
        out += format_real(row.diag_gap);
        out += ',';
        out += format_real(row.eta);
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot open file for writing: " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw InputError("write failed: " + path);
}

void append_validation(ReportDocument& doc, const theory::ValidationResult& result) {
    const std::string prefix = "validation." + result.name;
    doc.add_bool(prefix + ".passed", result.passed);
    for (const auto& [key, value] : result.measured)
        doc.add_real(prefix + ".measured." + key, value);
    for (const auto& [key, value] : result.tolerance)
        doc.add_real(prefix + ".tolerance." + key, value);
    for (const auto& [key, value] : result.config)
        doc.add_real(prefix + ".config." + key, value);
}

ReportDocument cmd_analyze(const AnalyzeOptions& opts) {
    const EmbeddingBatch batch = read_embedding(opts.input, opts.format);
    const SymMatrix cov = spectral::covariance(batch, /*centered=*/true);
    const geometry::GaussianModelConfig cfg(opts.sigma_sq, opts.lipschitz, batch.dim());

    std::optional<SymMatrix> population_c;
    if (opts.noise_var) {
        if (!(*opts.noise_var > 0.0)) throw InputError("analyze: noise-var must be > 0");
        population_c = barlow::population_cross_correlation(cov, *opts.noise_var);
    }

    geometry::EfficiencyReport report;
    try {
        const Matrix c = population_c ? population_c->to_matrix() : Matrix();
        report = geometry::build_report(cov, cfg, opts.epsilon,
                                        population_c ? &c : nullptr);
    } catch (const DegenerateSpectrumError&) {
        throw DegenerateSpectrumError(
            "analyze: representation collapsed to zero; null dimensions: " +
            null_dimension_list(cov));
    }

    ReportDocument doc = new_document("analyze");
    doc.add_int("input.n", static_cast<std::int64_t>(batch.n()));
    doc.add_int("input.d", static_cast<std::int64_t>(batch.dim()));
    doc.add_real("config.epsilon", opts.epsilon);
    doc.add_real("config.sigma_sq", opts.sigma_sq);
    doc.add_real("config.lipschitz", opts.lipschitz);
    if (opts.noise_var) {
        doc.add_real("config.noise_var", *opts.noise_var);
        doc.add_real("config.lambda", opts.lambda);
    }
    append_efficiency_report(doc, "report", report);
    if (population_c) {
        const Matrix c = population_c->to_matrix();
        append_matrix(doc, "population_correlation.c", c);
        append_loss(doc, "population_correlation.loss", barlow::bt_loss(c, opts.lambda));
    }
    maybe_write(opts.out, doc);
    return doc;
}

ReportDocument cmd_train(const TrainOptions& opts) {
    if (opts.steps < 1) throw UsageError("train: --steps must be >= 1");
    if (opts.d_in < 1 || opts.d_out < 1) throw UsageError("train: --d-in/--d-out must be >= 1");
    if (!(opts.lr > 0.0)) throw UsageError("train: --lr must be > 0");
    if (!(opts.lambda > 0.0)) throw UsageError("train: --lambda must be > 0");
    if (!(opts.noise_var > 0.0)) throw UsageError("train: --noise-var must be > 0");
    if (opts.batch_n < 2 * opts.d_out)
        throw UsageError("train: --batch-n must be >= 2*d_out");

    const SymMatrix data_cov = SymMatrix::identity(opts.d_in);
    const barlow::LinearEncoder init = barlow::LinearEncoder::random(
        opts.d_out, opts.d_in, mix_seed(opts.seed, kEncoderInitStream));
    const barlow::AugmentationModel aug(opts.noise_var, mix_seed(opts.seed, 0x4E4F49) /* noise stream */);

    barlow::TrainConfig cfg;
    cfg.lambda = opts.lambda;
    cfg.lr = opts.lr;
    cfg.steps = opts.steps;
    cfg.batch_n = opts.batch_n;
    cfg.report_eps = opts.epsilon;
    cfg.sigma_sq = opts.sigma_sq;
    cfg.lipschitz = opts.lipschitz;
    cfg.seed = opts.seed;

    const barlow::TrainResult result = barlow::train_toy(data_cov, init, aug, cfg);
    write_trace_csv(opts.trace_out, result.trace);

    const theory::EncoderEvaluation eval = theory::evaluate_encoder(
        result.encoder, data_cov, aug, theory::defaults::kEvalSamples, opts.epsilon,
        opts.sigma_sq, opts.lipschitz, mix_seed(opts.seed, 0x45564C) /* eval stream */);

    ReportDocument doc = new_document("train");
    doc.add_int("config.d_in", static_cast<std::int64_t>(opts.d_in));
    doc.add_int("config.d_out", static_cast<std::int64_t>(opts.d_out));
    doc.add_real("config.lambda", opts.lambda);
    doc.add_real("config.lr", opts.lr);
    doc.add_int("config.steps", static_cast<std::int64_t>(opts.steps));
    doc.add_int("config.batch_n", static_cast<std::int64_t>(opts.batch_n));
    doc.add_real("config.epsilon", opts.epsilon);
    doc.add_real("config.noise_var", opts.noise_var);
    doc.add_real("config.sigma_sq", opts.sigma_sq);
    doc.add_real("config.lipschitz", opts.lipschitz);
    doc.add_int("config.seed", static_cast<std::int64_t>(opts.seed));

    const barlow::TrainStepRecord& last = result.trace.steps.back();
    doc.add_int("final.step", static_cast<std::int64_t>(last.step));
    doc.add_real("final.invariance", last.invariance);
    doc.add_real("final.redundancy", last.redundancy);
    doc.add_real("final.total", last.total);
    doc.add_real("final.offdiag_mass", last.offdiag_mass);
    doc.add_real("final.diag_gap", last.diag_gap);
    doc.add_real("final.eta", last.eta);

    doc.add_real("eval.offdiag_mass", eval.offdiag_mass);
    doc.add_real("eval.diag_gap", eval.diag_gap);
    append_efficiency_report(doc, "eval.report", eval.report);
    maybe_write(opts.out, doc);
    return doc;
}

namespace {

struct ValidatorSuite {
    std::vector<theory::ValidationResult> results;

    void run(const ValidateOptions& opts, const std::string& claim);
};

void ValidatorSuite::run(const ValidateOptions& opts, const std::string& claim) {
    namespace defs = theory::defaults;
    const double sigma_sq = opts.sigma_sq.value_or(defs::kSigmaSq);
    const double lipschitz = opts.lipschitz.value_or(defs::kLipschitz);
    const double epsilon = opts.epsilon.value_or(defs::kEpsilon);
    const std::uint64_t seed = opts.seed.value_or(defs::kSeed);

    if (claim == "lemma1") {
        const geometry::GaussianModelConfig cfg(sigma_sq, lipschitz, 4);
        results.push_back(
            theory::validate_lemma1(cfg, opts.samples.value_or(defs::kMcSamples), seed));
    } else if (claim == "lemma3") {
        const theory::SyntheticSpec spec(2, {2.0, 1.0}, /*rotation_seed=*/0,
                                         opts.samples.value_or(defs::kMcSamples));
        results.push_back(theory::validate_lemma3(
            spec, opts.noise_var.value_or(defs::kNoiseVar), seed));
    } else if (claim == "lemma4") {
        results.push_back(theory::validate_lemma4(
            1.0, opts.noise_var.value_or(defs::kNoiseVar), 3, 0.01));
    } else if (claim == "theorem1") {
        const theory::SyntheticSpec spec(16, std::vector<double>(16, 3.0),
                                         /*rotation_seed=*/0, 0);
        const geometry::GaussianModelConfig cfg(sigma_sq, lipschitz, 16);
        results.push_back(theory::validate_theorem1(
            spec, cfg, opts.noise_var.value_or(defs::kNoiseVar)));
    } else if (claim == "theorem2") {
        const std::size_t d_in = opts.d_in.value_or(defs::kTrainDimIn);
        const std::size_t d_out = opts.d_out.value_or(defs::kTrainDimOut);
        const std::uint64_t train_seed = opts.seed.value_or(1);
        barlow::TrainConfig cfg;
        cfg.lambda = opts.lambda.value_or(cfg.lambda);
        cfg.lr = opts.lr.value_or(cfg.lr);
        cfg.steps = opts.steps.value_or(cfg.steps);
        cfg.batch_n = opts.samples.value_or(cfg.batch_n);
        cfg.report_eps = epsilon;
        cfg.sigma_sq = sigma_sq;
        cfg.lipschitz = lipschitz;
        cfg.seed = train_seed;
        const barlow::LinearEncoder init = barlow::LinearEncoder::random(
            d_out, d_in, mix_seed(train_seed, kEncoderInitStream));
        const barlow::AugmentationModel aug(
            opts.noise_var.value_or(defs::kTrainNoiseVar),
            mix_seed(train_seed, 0x4E4F49));
        results.push_back(theory::validate_theorem2(SymMatrix::identity(d_in), init, aug,
                                                    cfg, defs::kEvalSamples, epsilon));
    } else if (claim == "prop1") {
        // 5 ν-profiles × 5 σ² × 4 L = 100 configurations.
        const std::vector<std::vector<double>> profiles = {
            {4.0, 3.0, 2.0, 1.0},
            {1.0, 1.0, 1.0, 1.0},
            {10.0, 1.0, 0.1, 0.01},
            {1.0, 0.0, 0.0, 0.0},
            {5.0, 5.0, 2.0, 2.0},
        };
        std::vector<std::pair<double, double>> grid;
        for (double s2 : {0.25, 0.5, 1.0, 2.0, 4.0})
            for (double lip : {0.5, 1.0, 2.0, 4.0}) grid.emplace_back(s2, lip);
        auto sweep = theory::sweep_spectrum_map(profiles, grid, epsilon);
        results.insert(results.end(), sweep.begin(), sweep.end());
    } else {
        throw UsageError("validate: unknown claim '" + claim +
                         "' (expected lemma1|lemma3|lemma4|theorem1|theorem2|prop1|all)");
    }
}

} // namespace

ValidateOutcome cmd_validate(const ValidateOptions& opts) {
    ValidatorSuite suite;
    if (opts.claim == "all") {
        for (const char* claim :
             {"lemma1", "lemma3", "lemma4", "theorem1", "theorem2", "prop1"})
            suite.run(opts, claim);
    } else {
        suite.run(opts, opts.claim);
    }

    ValidateOutcome outcome;
    outcome.document = new_document("validate");
    outcome.document.add_string("config.claim", opts.claim);
    outcome.all_passed = true;
    for (const auto& result : suite.results) {
        append_validation(outcome.document, result);
        outcome.all_passed = outcome.all_passed && result.passed;
    }
    outcome.document.add_bool("all_passed", outcome.all_passed);
    maybe_write(opts.out, outcome.document);
    return outcome;
}

ReportDocument cmd_loss(const LossOptions& opts) {
    const EmbeddingBatch batch_a = read_embedding(opts.input_a, opts.format);
    const EmbeddingBatch batch_b = read_embedding(opts.input_b, opts.format);
    if (batch_a.n() != batch_b.n() || batch_a.dim() != batch_b.dim()) {
        throw InputError("loss: input shapes differ, " + std::to_string(batch_a.n()) + "x" +
                         std::to_string(batch_a.dim()) + " vs " +
                         std::to_string(batch_b.n()) + "x" + std::to_string(batch_b.dim()));
    }
    const Matrix c = barlow::cross_correlation(batch_a, batch_b);
    const barlow::BtLossBreakdown loss = barlow::bt_loss(c, opts.lambda);

    ReportDocument doc = new_document("loss");
    doc.add_int("input.n", static_cast<std::int64_t>(batch_a.n()));
    doc.add_int("input.d", static_cast<std::int64_t>(batch_a.dim()));
    doc.add_real("config.lambda", opts.lambda);
    append_matrix(doc, "correlation.c", c);
    append_loss(doc, "loss", loss);
    maybe_write(opts.out, doc);
    return doc;
}

} // namespace fimeff::io
