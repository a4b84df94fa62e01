// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "sijscc/errors.hpp"

namespace sijscc {

struct TrainConfig {
    int crop = 128;
    int batch = 112;
    double lr = 1e-4;
    double lr_decay = 0.8;       // multiplier applied on validation plateau
    int plateau_patience = 5;    // evaluations without improvement before decay
    double snr_low = -5.0;       // training SNR range in dB, uniform per example
    double snr_high = 20.0;
    bool noiseless = false;      // skip the channel entirely (exact zero noise)
    double charbonnier_eps = 1e-6;
    double lion_beta1 = 0.9;
    double lion_beta2 = 0.99;
    double weight_decay = 1e-2;
    long max_steps = 100000;
    int eval_interval = 50;      // steps between validation evaluations
    int val_batch = 8;
    uint64_t seed = 0;

    void validate() const {
        if (crop < 4 || crop % 4 != 0)
            throw ConfigError("TrainConfig: crop must be a positive multiple of 4");
        if (batch < 1) throw ConfigError("TrainConfig: batch must be positive");
        if (!(lr > 0)) throw ConfigError("TrainConfig: lr must be positive");
        if (!(lr_decay > 0 && lr_decay < 1))
            throw ConfigError("TrainConfig: lr_decay must lie in (0,1)");
        if (plateau_patience < 1) throw ConfigError("TrainConfig: plateau_patience must be >= 1");
        if (snr_low > snr_high) throw ConfigError("TrainConfig: snr_low must be <= snr_high");
        if (!(charbonnier_eps > 0)) throw ConfigError("TrainConfig: charbonnier_eps must be > 0");
        if (max_steps < 0) throw ConfigError("TrainConfig: max_steps must be >= 0");
        if (eval_interval < 1) throw ConfigError("TrainConfig: eval_interval must be >= 1");
        if (val_batch < 1) throw ConfigError("TrainConfig: val_batch must be >= 1");
        if (weight_decay < 0) throw ConfigError("TrainConfig: weight_decay must be >= 0");
    }
};

} // namespace sijscc
