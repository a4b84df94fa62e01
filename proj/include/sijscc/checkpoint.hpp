// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "sijscc/codec.hpp"
#include "sijscc/train_config.hpp"

namespace sijscc {

// Full training state: weights, optimizer momentum, configuration and the
// RNG cursors needed to resume bit-exactly. Serialized as a magic/version
// header, a JSON metadata document, then named f32 tensors.
struct Checkpoint {
    ModelConfig model;
    BuildOptions build;
    TrainConfig train;
    long step = 0;
    double lr = 0.0;
    double best_val_loss = 0.0;
    int bad_evals = 0;
    uint64_t data_cursor = 0;
    uint64_t snr_cursor = 0;
    std::map<std::string, Tensor4<float>> weights;
    std::map<std::string, Tensor4<float>> momentum; // may be empty (fresh model)
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Captures the codec's current weights (momentum filled in by the trainer).
Checkpoint snapshot_weights(Codec<float>& codec, const TrainConfig& train);

// Copies checkpoint weights into a codec built with the same config; throws
// CheckpointError on any architecture mismatch.
void apply_weights(Codec<float>& codec, const Checkpoint& ckpt);

// Convenience: build a codec matching the checkpoint and load its weights.
std::unique_ptr<Codec<float>> codec_from_checkpoint(const Checkpoint& ckpt);

// FNV-1a over the weight bytes in name order; used to stamp run metadata.
uint64_t weights_fingerprint(const Checkpoint& ckpt);

} // namespace sijscc
