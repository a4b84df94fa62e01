// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>

#include "sijscc/evaluation.hpp"
#include "sijscc/training.hpp"

namespace sijscc {

// Which sides of the codec receive the channel SNR through AF modules.
enum class ConditioningMode { Both, DecoderOnly, None };

const char* conditioning_mode_name(ConditioningMode m);
ConditioningMode conditioning_mode_from_name(const std::string& s);
BuildOptions conditioning_build_options(ConditioningMode m);

// Builds the codec with AF modules inserted after the 2nd and 4th residual
// blocks of the selected sides; mode None is exactly the base model.
std::unique_ptr<Codec<float>> build_conditioned(const ModelConfig& cfg, ConditioningMode mode,
                                                uint64_t seed);

struct AblationArm {
    std::string label; // mode name, plus ":mismatch@<snr>dB" for mismatch runs
    ConditioningMode mode;
    long steps_run = 0;
    double best_val_loss = 0.0;
    std::vector<MetricsRecord> records;
};

struct AblationResult {
    std::vector<AblationArm> arms;
};

// Trains each requested variant under identical data order, seeds and
// schedules (conditioned variants see the true per-example SNR), then sweeps
// eval_snrs. If mismatch_snr is set, conditioned arms are additionally
// evaluated with the conditioning input pinned to that value while the
// channel varies, and those rows are labelled as mismatch runs.
AblationResult ablation_run(const std::vector<ConditioningMode>& modes,
                            const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                            const std::string& train_root, const std::string& val_root,
                            const std::vector<std::pair<std::string, Tensor4<float>>>& eval_images,
                            const std::vector<double>& eval_snrs, uint64_t eval_seed,
                            std::optional<double> mismatch_snr = std::nullopt,
                            const ProgressFn& progress = {});

} // namespace sijscc
