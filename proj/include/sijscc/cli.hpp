// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sijscc::cli {

// Exit codes shared by all commands:
//   0 success, 2 user/config error, 3 training divergence,
//   4 checkpoint incompatibility, 1 unexpected failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitCheckpoint = 4;

struct TrainArgs {
    std::string config_path;
    std::string out_dir_override; // highest precedence; then $SIJSCC_OUT_DIR
    std::optional<long> max_steps;
    std::optional<uint64_t> seed;
};

struct EvalArgs {
    std::string checkpoint_path;
    std::string data_path;
    std::vector<double> snrs;
    std::string out_dir = "out";
    std::string channel = "awgn";
    double rician_k = 0.0;
    uint64_t seed = 0;
    std::optional<double> mismatch_snr; // conditioning input pinned to this value
};

struct TransmitArgs {
    std::string checkpoint_path;
    std::string image_path;
    double snr_db = 10.0;
    std::string out_symbols;
    std::string out_image;
    std::string channel = "awgn";
    double rician_k = 0.0;
    uint64_t seed = 0;
};

struct ReceiveArgs {
    std::string checkpoint_path;
    std::string symbols_path;
    std::string out_image;
};

struct InfoArgs {
    std::string checkpoint_path; // one of checkpoint/config required
    std::string config_path;
    int height = 768;
    int width = 512;
    bool per_layer = false;
};

struct AblateArgs {
    std::string config_path;
    std::vector<std::string> modes = {"both", "decoder_only", "none"};
    std::vector<double> snrs = {1, 4, 7, 13, 19};
    std::optional<double> mismatch_snr;
    std::string out_dir_override;
};

struct PlotArgs {
    std::string metrics_csv;
    std::string out_svg;
    std::string title = "PSNR vs SNR";
};

int cmd_train(const TrainArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_transmit(const TransmitArgs& args);
int cmd_receive(const ReceiveArgs& args);
int cmd_info(const InfoArgs& args);
int cmd_ablate(const AblateArgs& args);
int cmd_plot(const PlotArgs& args);

} // namespace sijscc::cli
