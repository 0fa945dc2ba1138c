// tools/fimeff_main.cpp — the fimeff command line.
//
//   fimeff analyze  --input embeddings.csv [--format csv|bin-f64] [...]
//   fimeff train    [--steps N --lr ... --seed S --trace-out trace.csv]
//   fimeff validate [claim] [overrides]
//   fimeff loss     --input a.csv --input-b b.csv [--lambda L]
//
// Exit codes: 0 success / all-pass, 1 validation failure, 2 usage error,
// 3 input or parse error, 4 numerical divergence.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fimeff/commands.hpp"

namespace {

using namespace fimeff;

int run(int argc, char** argv) {
    CLI::App app{"fimeff — representation-efficiency analysis for Barlow Twins embeddings"};
    app.require_subcommand(1);

    io::AnalyzeOptions analyze_opts;
    std::string analyze_format = "csv";
    auto* analyze = app.add_subcommand("analyze", "Efficiency report for an embedding file");
    analyze->add_option("--input", analyze_opts.input, "embedding matrix file")->required();
    analyze->add_option("--format", analyze_format, "csv or bin-f64");
    analyze->add_option("--epsilon", analyze_opts.epsilon, "spectral mass threshold");
    analyze->add_option("--sigma-sq", analyze_opts.sigma_sq, "observation-noise variance");
    analyze->add_option("--lipschitz", analyze_opts.lipschitz, "encoder Lipschitz constant");
    analyze->add_option("--lambda", analyze_opts.lambda, "loss trade-off weight");
    double analyze_noise = 0.0;
    auto* analyze_noise_opt = analyze->add_option(
        "--noise-var", analyze_noise, "augmentation variance; adds the population-C section");
    std::string analyze_out;
    auto* analyze_out_opt = analyze->add_option("--out", analyze_out, "also write report here");

    io::TrainOptions train_opts;
    auto* train = app.add_subcommand("train", "Train the toy linear Barlow Twins encoder");
    train->add_option("--d-in", train_opts.d_in, "data dimension");
    train->add_option("--d-out", train_opts.d_out, "representation dimension");
    train->add_option("--lambda", train_opts.lambda, "loss trade-off weight");
    train->add_option("--lr", train_opts.lr, "learning rate");
    train->add_option("--steps", train_opts.steps, "gradient steps");
    train->add_option("--batch-n", train_opts.batch_n, "batch size");
    train->add_option("--epsilon", train_opts.epsilon, "spectral mass threshold");
    train->add_option("--noise-var", train_opts.noise_var, "augmentation variance");
    train->add_option("--sigma-sq", train_opts.sigma_sq, "observation-noise variance");
    train->add_option("--lipschitz", train_opts.lipschitz, "encoder Lipschitz constant");
    train->add_option("--seed", train_opts.seed, "run seed");
    train->add_option("--trace-out", train_opts.trace_out, "trace CSV path");
    std::string train_out;
    auto* train_out_opt = train->add_option("--out", train_out, "also write report here");

    io::ValidateOptions validate_opts;
    auto* validate = app.add_subcommand("validate", "Run claim validators");
    validate->add_option("claim", validate_opts.claim,
                         "lemma1|lemma3|lemma4|theorem1|theorem2|prop1|all");
    std::size_t v_samples = 0;
    double v_sigma_sq = 0, v_noise = 0, v_lip = 0, v_eps = 0, v_lambda = 0, v_lr = 0;
    std::size_t v_steps = 0, v_d_in = 0, v_d_out = 0;
    std::uint64_t v_seed = 0;
    auto* o_samples = validate->add_option("--batch-n", v_samples,
                                           "sample / batch count override");
    auto* o_sigma = validate->add_option("--sigma-sq", v_sigma_sq, "σ² override");
    auto* o_noise = validate->add_option("--noise-var", v_noise, "σ_ε² override");
    auto* o_lip = validate->add_option("--lipschitz", v_lip, "L override");
    auto* o_eps = validate->add_option("--epsilon", v_eps, "ε override");
    auto* o_lambda = validate->add_option("--lambda", v_lambda, "λ override");
    auto* o_lr = validate->add_option("--lr", v_lr, "lr override (theorem2)");
    auto* o_steps = validate->add_option("--steps", v_steps, "steps override (theorem2)");
    auto* o_d_in = validate->add_option("--d-in", v_d_in, "d_in override (theorem2)");
    auto* o_d_out = validate->add_option("--d-out", v_d_out, "d_out override (theorem2)");
    auto* o_seed = validate->add_option("--seed", v_seed, "seed override");
    std::string validate_out;
    auto* validate_out_opt =
        validate->add_option("--out", validate_out, "also write report here");

    io::LossOptions loss_opts;
    std::string loss_format = "csv";
    auto* loss = app.add_subcommand("loss", "Barlow Twins loss of two embedding files");
    loss->add_option("--input", loss_opts.input_a, "view A file")->required();
    loss->add_option("--input-b", loss_opts.input_b, "view B file")->required();
    loss->add_option("--format", loss_format, "csv or bin-f64");
    loss->add_option("--lambda", loss_opts.lambda, "loss trade-off weight");
    std::string loss_out;
    auto* loss_out_opt = loss->add_option("--out", loss_out, "also write report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (analyze->parsed()) {
        analyze_opts.format = io::parse_format(analyze_format);
        if (analyze_noise_opt->count() > 0) analyze_opts.noise_var = analyze_noise;
        if (analyze_out_opt->count() > 0) analyze_opts.out = analyze_out;
        std::cout << io::cmd_analyze(analyze_opts).serialize();
        return 0;
    }
    if (train->parsed()) {
        if (train_out_opt->count() > 0) train_opts.out = train_out;
        std::cout << io::cmd_train(train_opts).serialize();
        return 0;
    }
    if (validate->parsed()) {
        if (o_samples->count() > 0) validate_opts.samples = v_samples;
        if (o_sigma->count() > 0) validate_opts.sigma_sq = v_sigma_sq;
        if (o_noise->count() > 0) validate_opts.noise_var = v_noise;
        if (o_lip->count() > 0) validate_opts.lipschitz = v_lip;
        if (o_eps->count() > 0) validate_opts.epsilon = v_eps;
        if (o_lambda->count() > 0) validate_opts.lambda = v_lambda;
        if (o_lr->count() > 0) validate_opts.lr = v_lr;
        if (o_steps->count() > 0) validate_opts.steps = v_steps;
        if (o_d_in->count() > 0) validate_opts.d_in = v_d_in;
        if (o_d_out->count() > 0) validate_opts.d_out = v_d_out;
        if (o_seed->count() > 0) validate_opts.seed = v_seed;
        if (validate_out_opt->count() > 0) validate_opts.out = validate_out;
        const io::ValidateOutcome outcome = io::cmd_validate(validate_opts);
        std::cout << outcome.document.serialize();
        return outcome.all_passed ? 0 : 1;
    }
    if (loss->parsed()) {
        loss_opts.format = io::parse_format(loss_format);
        if (loss_out_opt->count() > 0) loss_opts.out = loss_out;
        std::cout << io::cmd_loss(loss_opts).serialize();
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
