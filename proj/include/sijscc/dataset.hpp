// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sijscc/rng.hpp"
#include "sijscc/tensor.hpp"

namespace sijscc {

// Random-crop patch source over a folder of images. Images smaller than the
// crop are skipped with a warning; an empty usable set is an ingestion error.
// The patch sequence is a pure function of (seed, cursor), so data order can
// be checkpointed and resumed exactly.
class PatchDataset {
public:
    PatchDataset(const std::string& root, int crop, uint64_t seed, int channels = 3);

    size_t image_count() const { return images_.size(); }
    int crop() const { return crop_; }
    const std::string& root() const { return root_; }

    // next `batch` random patches, advancing the cursor
    Tensor4<float> next_batch(int batch);

    // deterministic batch independent of the cursor (validation snapshots)
    Tensor4<float> fixed_batch(int batch, uint64_t salt) const;

    uint64_t cursor() const { return cursor_; }
    void set_cursor(uint64_t c) { cursor_ = c; }
    uint64_t seed() const { return seed_; }

private:
    void fill_patch(Tensor4<float>& dst, int slot, uint64_t draw_index) const;

    std::string root_;
    int crop_;
    int channels_;
    uint64_t seed_;
    uint64_t cursor_ = 0;
    std::vector<Tensor4<float>> images_;
};

// Whole images (name, tensor) for evaluation sweeps, sorted by filename.
std::vector<std::pair<std::string, Tensor4<float>>> load_eval_images(const std::string& root,
                                                                     int channels = 3);

// Crops centrally to the nearest multiple of 4 per side.
Tensor4<float> center_crop_mod4(const Tensor4<float>& img);

} // namespace sijscc
