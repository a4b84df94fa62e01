// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "sijscc/symbols.hpp"

namespace sijscc {

// On-disk channel-symbol format (little endian):
//   magic   "SJSC"
//   u16     version (1)
//   u64     k          number of complex symbols
//   u16     t          latent width the encoder used
//   u32     h, w       source image size in pixels
//   f32     snr_db     channel SNR the symbols went through (NaN if none)
//   k pairs of f32     interleaved (re, im)
struct SymbolFile {
    uint64_t k = 0;
    uint16_t t = 0;
    uint32_t h = 0, w = 0;
    float snr_db = 0;
    ComplexSymbolVector symbols;
};

void write_symbol_file(const std::string& path, const ComplexSymbolVector& z, uint16_t t,
                       uint32_t h, uint32_t w, float snr_db);

SymbolFile read_symbol_file(const std::string& path);

} // namespace sijscc
