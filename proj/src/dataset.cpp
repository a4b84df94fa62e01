// SPDX-License-Identifier: Apache-2.0
#include "sijscc/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "sijscc/errors.hpp"
#include "sijscc/image_io.hpp"

namespace fs = std::filesystem;

namespace sijscc {

namespace {

constexpr uint64_t kDataStreamTag = 0x64617461ULL; // "data"

std::vector<std::string> list_images(const std::string& root) {
    if (!fs::exists(root) || !fs::is_directory(root))
        throw IngestError("dataset root is not a directory: " + root);
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_regular_file() && has_image_extension(e.path().string()))
            files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

Tensor4<float> to_channels(const Tensor4<float>& img, int channels) {
    if (img.c() == channels) return img;
    Tensor4<float> out(1, channels, img.h(), img.w());
    if (img.c() == 1) { // replicate gray
        for (int c = 0; c < channels; ++c)
            for (int y = 0; y < img.h(); ++y)
                for (int x = 0; x < img.w(); ++x) out(0, c, y, x) = img(0, 0, y, x);
        return out;
    }
    if (channels == 1) { // luma-less average
        for (int y = 0; y < img.h(); ++y)
            for (int x = 0; x < img.w(); ++x) {
                float acc = 0;
                for (int c = 0; c < img.c(); ++c) acc += img(0, c, y, x);
                out(0, 0, y, x) = acc / img.c();
            }
        return out;
    }
    throw IngestError("cannot convert image channels " + std::to_string(img.c()) + " -> " +
                      std::to_string(channels));
}

} // namespace

PatchDataset::PatchDataset(const std::string& root, int crop, uint64_t seed, int channels)
    : root_(root), crop_(crop), channels_(channels), seed_(seed) {
    if (crop < 4 || crop % 4 != 0)
        throw ConfigError("PatchDataset: crop must be a positive multiple of 4");
    size_t skipped = 0;
    for (const auto& f : list_images(root)) {
        Tensor4<float> img = to_channels(load_image(f), channels);
        if (img.h() < crop || img.w() < crop) {
            std::fprintf(stderr, "[dataset] skipping %s: %dx%d smaller than crop %d\n", f.c_str(),
                         img.w(), img.h(), crop);
            ++skipped;
            continue;
        }
        images_.push_back(std::move(img));
    }
    if (images_.empty())
        throw IngestError("no usable images under " + root + " (" + std::to_string(skipped) +
                          " skipped as too small)");
}

void PatchDataset::fill_patch(Tensor4<float>& dst, int slot, uint64_t draw_index) const {
    Rng rng(seed_, mix64(kDataStreamTag ^ draw_index));
    const auto& img = images_[rng.next_below(images_.size())];
    const int y0 = static_cast<int>(rng.next_below(img.h() - crop_ + 1));
    const int x0 = static_cast<int>(rng.next_below(img.w() - crop_ + 1));
    for (int c = 0; c < channels_; ++c)
        for (int y = 0; y < crop_; ++y)
            for (int x = 0; x < crop_; ++x)
                dst(slot, c, y, x) = img(0, c, y0 + y, x0 + x);
}

Tensor4<float> PatchDataset::next_batch(int batch) {
    Tensor4<float> out(batch, channels_, crop_, crop_);
    for (int i = 0; i < batch; ++i) fill_patch(out, i, cursor_++);
    return out;
}

Tensor4<float> PatchDataset::fixed_batch(int batch, uint64_t salt) const {
    Tensor4<float> out(batch, channels_, crop_, crop_);
    for (int i = 0; i < batch; ++i)
        fill_patch(out, i, 0xF1C5ED000000ULL + salt * 4096 + static_cast<uint64_t>(i));
    return out;
}

std::vector<std::pair<std::string, Tensor4<float>>> load_eval_images(const std::string& root,
                                                                     int channels) {
    std::vector<std::pair<std::string, Tensor4<float>>> out;
    for (const auto& f : list_images(root)) {
        Tensor4<float> img = to_channels(load_image(f), channels);
        out.emplace_back(fs::path(f).filename().string(), std::move(img));
    }
    if (out.empty()) throw IngestError("no images under " + root);
    return out;
}

Tensor4<float> center_crop_mod4(const Tensor4<float>& img) {
    const int h = img.h() / 4 * 4;
    const int w = img.w() / 4 * 4;
    if (h == img.h() && w == img.w()) return img;
    if (h < 4 || w < 4) throw DegenerateInputError("center_crop_mod4: image too small");
    const int y0 = (img.h() - h) / 2, x0 = (img.w() - w) / 2;
    Tensor4<float> out(img.b(), img.c(), h, w);
    for (int n = 0; n < img.b(); ++n)
        for (int c = 0; c < img.c(); ++c)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) out(n, c, y, x) = img(n, c, y0 + y, x0 + x);
    return out;
}

} // namespace sijscc
