// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "sijscc/image_io.hpp"
#include "sijscc/nn/layers.hpp"
#include "sijscc/rng.hpp"
#include "sijscc/tensor.hpp"

namespace sijscc::test {

// Procedural test image: smooth sinusoid mixture plus a few rectangles, so
// train/held-out splits share statistics without shipping any dataset.
inline Tensor4<float> synthetic_image(int h, int w, uint64_t seed) {
    Rng rng(seed, 900);
    Tensor4<float> img(1, 3, h, w);
    double fx[3], fy[3], ph[3], base[3];
    for (int c = 0; c < 3; ++c) {
        fx[c] = rng.next_range(1.0, 6.0);
        fy[c] = rng.next_range(1.0, 6.0);
        ph[c] = rng.next_range(0.0, 6.28);
        base[c] = rng.next_range(0.25, 0.75);
    }
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double v = base[c] + 0.25 * std::sin(fx[c] * 6.28 * x / w + ph[c]) *
                                         std::cos(fy[c] * 6.28 * y / h);
                img(0, c, y, x) = static_cast<float>(std::min(1.0, std::max(0.0, v)));
            }
    const int rects = 3;
    for (int r = 0; r < rects; ++r) {
        int y0 = static_cast<int>(rng.next_below(h / 2));
        int x0 = static_cast<int>(rng.next_below(w / 2));
        int hh = 2 + static_cast<int>(rng.next_below(h / 3));
        int ww = 2 + static_cast<int>(rng.next_below(w / 3));
        float val[3] = {static_cast<float>(rng.next_unit()), static_cast<float>(rng.next_unit()),
                        static_cast<float>(rng.next_unit())};
        for (int c = 0; c < 3; ++c)
            for (int y = y0; y < std::min(h, y0 + hh); ++y)
                for (int x = x0; x < std::min(w, x0 + ww); ++x) img(0, c, y, x) = val[c];
    }
    return img;
}

inline void write_synthetic_folder(const std::string& dir, int count, int h, int w,
                                   uint64_t seed0) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < count; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "%s/img_%03d.ppm", dir.c_str(), i);
        save_image(name, synthetic_image(h, w, seed0 + i));
    }
}

template <typename S>
void fill_random(Tensor4<S>& t, Rng& rng, double lo = -1.0, double hi = 1.0) {
    for (size_t i = 0; i < t.size(); ++i) t.flat(i) = static_cast<S>(rng.next_range(lo, hi));
}

// Sets every parameter of a block to a constant (usually zero).
template <typename S>
void set_all_params(nn::Block<S>& block, S value) {
    std::vector<nn::ParamRef<S>> params;
    block.collect_params("p", params);
    for (auto& p : params) p.value->fill(value);
}

template <typename S>
void randomize_params(nn::Block<S>& block, uint64_t seed, double scale = 0.3) {
    std::vector<nn::ParamRef<S>> params;
    block.collect_params("p", params);
    Rng rng(seed, 321);
    for (auto& p : params)
        for (size_t i = 0; i < p.value->size(); ++i)
            p.value->flat(i) = static_cast<S>(rng.next_range(-scale, scale));
}

inline std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("sijscc_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

} // namespace sijscc::test
