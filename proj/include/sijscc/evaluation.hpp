// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sijscc/channel.hpp"
#include "sijscc/codec.hpp"
#include "sijscc/metrics.hpp"

namespace sijscc {

struct SweepOptions {
    ChannelKind kind = ChannelKind::Awgn;
    double rician_k = 0.0;
    uint64_t seed = 0;
    bool equalize_fading = true;
    // For SNR-conditioned models: value fed to the conditioning inputs. By
    // default the true channel SNR (matched); set to simulate mismatch.
    std::optional<double> conditioning_snr_override;
};

// Average PSNR/SSIM over the dataset for each SNR point. Noise is keyed by
// (seed, image index, SNR index), so repeated runs reproduce exact records.
// Images are center-cropped to a multiple of 4 per side.
std::vector<MetricsRecord> snr_sweep(Codec<float>& codec,
                                     const std::vector<std::pair<std::string, Tensor4<float>>>& images,
                                     const std::string& dataset_id,
                                     const std::vector<double>& snrs,
                                     const SweepOptions& opt = {});

// Batched encode -> channel -> decode with output clamped to [0,1].
// snr_db = nullopt sends the latent through untouched (a zero-noise channel).
Tensor4<float> reconstruct_batch(Codec<float>& codec, const Tensor4<float>& batch,
                                 std::optional<double> snr_db, uint64_t seed, uint64_t nonce);

} // namespace sijscc
