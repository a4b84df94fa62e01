// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <optional>

#include "sijscc/checkpoint.hpp"
#include "sijscc/dataset.hpp"

namespace sijscc {

// mean over all elements of sqrt((x - xhat)^2 + eps)
double charbonnier_loss(const Tensor4<float>& x, const Tensor4<float>& xhat, double eps);

// d(loss)/d(xhat)
Tensor4<float> charbonnier_grad(const Tensor4<float>& x, const Tensor4<float>& xhat, double eps);

// Sign-momentum optimizer state; one momentum tensor per parameter, in
// parameter-collection order.
struct LionState {
    std::vector<Tensor4<float>> momentum;
    long step = 0;
};

void lion_init(LionState& state, const std::vector<nn::ParamRef<float>>& params);

// update = sign(b1*m + (1-b1)*g); w -= lr*(update + wd*w); m = b2*m + (1-b2)*g
void lion_step(const std::vector<nn::ParamRef<float>>& params, LionState& state, double lr,
               const TrainConfig& cfg);

// One uniform draw in [snr_low, snr_high] dB (exact value when the range is
// degenerate).
double sample_training_snr(const TrainConfig& cfg, Rng& rng);

struct TrainOutcome {
    Checkpoint best;  // state at the best validation loss
    Checkpoint last;  // most recent state (resume point)
    bool diverged = false;
    long steps_run = 0;
    // rows: {step, train_loss, val_loss (NaN when no eval at that step)}
    std::vector<std::array<double, 3>> loss_log;
};

using ProgressFn = std::function<void(long step, double train_loss, double val_loss)>;

// End-to-end optimization of decode(channel(encode(x))) under the Charbonnier
// objective with a per-example random training SNR. Resumes bit-exactly from
// a checkpoint produced by a previous call with the same config and data.
TrainOutcome train(Codec<float>& model, PatchDataset& train_data, PatchDataset* val_data,
                   const TrainConfig& cfg, const Checkpoint* resume = nullptr,
                   const ProgressFn& progress = {});

} // namespace sijscc
