// SPDX-License-Identifier: Apache-2.0
#include "sijscc/conditioning.hpp"

namespace sijscc {

const char* conditioning_mode_name(ConditioningMode m) {
    switch (m) {
    case ConditioningMode::Both: return "both";
    case ConditioningMode::DecoderOnly: return "decoder_only";
    case ConditioningMode::None: return "none";
    }
    return "?";
}

ConditioningMode conditioning_mode_from_name(const std::string& s) {
    if (s == "both") return ConditioningMode::Both;
    if (s == "decoder_only") return ConditioningMode::DecoderOnly;
    if (s == "none") return ConditioningMode::None;
    throw ConfigError("unknown conditioning mode: " + s);
}

BuildOptions conditioning_build_options(ConditioningMode m) {
    BuildOptions opts;
    opts.snr_adaptive_encoder = (m == ConditioningMode::Both);
    opts.snr_adaptive_decoder = (m != ConditioningMode::None);
    return opts;
}

std::unique_ptr<Codec<float>> build_conditioned(const ModelConfig& cfg, ConditioningMode mode,
                                                uint64_t seed) {
    auto codec = std::make_unique<Codec<float>>(cfg, conditioning_build_options(mode));
    codec->init_weights(seed);
    return codec;
}

AblationResult ablation_run(const std::vector<ConditioningMode>& modes,
                            const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                            const std::string& train_root, const std::string& val_root,
                            const std::vector<std::pair<std::string, Tensor4<float>>>& eval_images,
                            const std::vector<double>& eval_snrs, uint64_t eval_seed,
                            std::optional<double> mismatch_snr, const ProgressFn& progress) {
    AblationResult result;
    for (ConditioningMode mode : modes) {
        // fresh datasets per arm: identical seed -> identical patch sequence
        PatchDataset train_data(train_root, train_cfg.crop, train_cfg.seed,
                                model_cfg.input_channels);
        std::optional<PatchDataset> val_data;
        if (!val_root.empty() && val_root != train_root)
            val_data.emplace(val_root, train_cfg.crop, train_cfg.seed, model_cfg.input_channels);

        auto codec = build_conditioned(model_cfg, mode, train_cfg.seed);
        TrainOutcome outcome =
            train(*codec, train_data, val_data ? &*val_data : nullptr, train_cfg, nullptr, progress);
        apply_weights(*codec, outcome.best);

        SweepOptions sweep_opt;
        sweep_opt.seed = eval_seed;
        AblationArm arm;
        arm.label = conditioning_mode_name(mode);
        arm.mode = mode;
        arm.steps_run = outcome.steps_run;
        arm.best_val_loss = outcome.best.best_val_loss;
        arm.records = snr_sweep(*codec, eval_images, arm.label, eval_snrs, sweep_opt);
        result.arms.push_back(std::move(arm));

        if (mismatch_snr && mode != ConditioningMode::None) {
            SweepOptions mm = sweep_opt;
            mm.conditioning_snr_override = *mismatch_snr;
            AblationArm marm;
            marm.label = std::string(conditioning_mode_name(mode)) + ":mismatch@" +
                         std::to_string(*mismatch_snr) + "dB";
            marm.mode = mode;
            marm.steps_run = outcome.steps_run;
            marm.best_val_loss = outcome.best.best_val_loss;
            marm.records = snr_sweep(*codec, eval_images, marm.label, eval_snrs, mm);
            result.arms.push_back(std::move(marm));
        }
    }
    return result;
}

} // namespace sijscc
