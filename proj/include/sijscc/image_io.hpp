// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "sijscc/tensor.hpp"

namespace sijscc {

// Binary PPM (P6, RGB) and PGM (P5, gray), 8-bit. Pixels are returned in
// [0,1] as a 1 x c x h x w tensor.
Tensor4<float> load_image(const std::string& path);

// Writes .ppm for 3-channel and .pgm for 1-channel tensors (first batch item).
// Values are clamped to [0,1] and rounded to 8 bits.
void save_image(const std::string& path, const Tensor4<float>& img);

bool has_image_extension(const std::string& path);

} // namespace sijscc
