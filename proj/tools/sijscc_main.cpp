// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include "sijscc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"SNR-independent joint source-channel codec for image transmission"};
    app.require_subcommand(1);

    sijscc::cli::TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train a codec from a config file");
    train->add_option("--config", train_args.config_path, "Run config (JSON)")->required();
    train->add_option("--out-dir", train_args.out_dir_override, "Override paths.out_dir");
    long max_steps = -1;
    train->add_option("--max-steps", max_steps, "Override train.max_steps");
    int64_t seed = -1;
    train->add_option("--seed", seed, "Override train.seed");

    sijscc::cli::EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Sweep SNRs over a dataset and write metrics");
    eval->add_option("--checkpoint", eval_args.checkpoint_path, "Checkpoint file")->required();
    eval->add_option("--data", eval_args.data_path, "Image folder")->required();
    eval->add_option("--snrs", eval_args.snrs, "SNR points in dB")->delimiter(',');
    eval->add_option("--out-dir", eval_args.out_dir, "Output directory");
    eval->add_option("--channel", eval_args.channel, "awgn|rayleigh|rician");
    eval->add_option("--rician-k", eval_args.rician_k, "Rician K factor");
    eval->add_option("--seed", eval_args.seed, "Noise seed");
    double eval_mismatch = std::numeric_limits<double>::quiet_NaN();
    eval->add_option("--mismatch-snr", eval_mismatch,
                     "Pin the conditioning input to this dB value (mismatch run)");

    sijscc::cli::TransmitArgs tx_args;
    auto* tx = app.add_subcommand("transmit", "Encode an image, pass it through the channel, "
                                              "write symbols and reconstruction");
    tx->add_option("--checkpoint", tx_args.checkpoint_path)->required();
    tx->add_option("--image", tx_args.image_path, "Input image (.ppm/.pgm)")->required();
    tx->add_option("--snr", tx_args.snr_db, "Channel SNR in dB");
    tx->add_option("--out-symbols", tx_args.out_symbols, "Symbol file to write");
    tx->add_option("--out-image", tx_args.out_image, "Reconstruction to write");
    tx->add_option("--channel", tx_args.channel, "awgn|rayleigh|rician");
    tx->add_option("--rician-k", tx_args.rician_k);
    tx->add_option("--seed", tx_args.seed, "Noise seed");

    sijscc::cli::ReceiveArgs rx_args;
    auto* rx = app.add_subcommand("receive", "Decode a symbol file into an image");
    rx->add_option("--checkpoint", rx_args.checkpoint_path)->required();
    rx->add_option("--symbols", rx_args.symbols_path)->required();
    rx->add_option("--out-image", rx_args.out_image)->required();

    sijscc::cli::InfoArgs info_args;
    auto* info = app.add_subcommand("info", "Print parameter/MAC complexity");
    info->add_option("--checkpoint", info_args.checkpoint_path);
    info->add_option("--config", info_args.config_path);
    info->add_option("--height", info_args.height);
    info->add_option("--width", info_args.width);
    info->add_flag("--per-layer", info_args.per_layer, "Print the per-layer table");

    sijscc::cli::AblateArgs ab_args;
    auto* ab = app.add_subcommand("ablate", "Train and compare SNR-conditioning variants");
    ab->add_option("--config", ab_args.config_path)->required();
    ab->add_option("--modes", ab_args.modes, "both,decoder_only,none")->delimiter(',');
    ab->add_option("--snrs", ab_args.snrs, "Evaluation SNRs in dB")->delimiter(',');
    double ab_mismatch = std::numeric_limits<double>::quiet_NaN();
    ab->add_option("--mismatch-snr", ab_mismatch, "Also evaluate with a pinned wrong SNR input");
    ab->add_option("--out-dir", ab_args.out_dir_override);

    sijscc::cli::PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render a metrics CSV as an SVG line plot");
    plot->add_option("--metrics", plot_args.metrics_csv)->required();
    plot->add_option("--out", plot_args.out_svg)->required();
    plot->add_option("--title", plot_args.title);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : sijscc::cli::kExitUsage;
    }

    if (train->parsed()) {
        if (max_steps >= 0) train_args.max_steps = max_steps;
        if (seed >= 0) train_args.seed = static_cast<uint64_t>(seed);
        return sijscc::cli::cmd_train(train_args);
    }
    if (eval->parsed()) {
        if (!std::isnan(eval_mismatch)) eval_args.mismatch_snr = eval_mismatch;
        return sijscc::cli::cmd_eval(eval_args);
    }
    if (tx->parsed()) return sijscc::cli::cmd_transmit(tx_args);
    if (rx->parsed()) return sijscc::cli::cmd_receive(rx_args);
    if (info->parsed()) return sijscc::cli::cmd_info(info_args);
    if (ab->parsed()) {
        if (!std::isnan(ab_mismatch)) ab_args.mismatch_snr = ab_mismatch;
        return sijscc::cli::cmd_ablate(ab_args);
    }
    if (plot->parsed()) return sijscc::cli::cmd_plot(plot_args);
    return sijscc::cli::kExitUsage;
}
