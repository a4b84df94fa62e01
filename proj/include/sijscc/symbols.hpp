// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "sijscc/errors.hpp"
#include "sijscc/tensor.hpp"

namespace sijscc {

// Channel-facing representation: a flat vector of complex symbols.
struct ComplexSymbolVector {
    std::vector<std::complex<float>> symbols;

    size_t k() const { return symbols.size(); }

    // mean squared magnitude
    double power() const {
        if (symbols.empty()) return 0.0;
        double acc = pairwise_accumulate(0, symbols.size(), [&](size_t i) {
            return static_cast<double>(symbols[i].real()) * symbols[i].real() +
                   static_cast<double>(symbols[i].imag()) * symbols[i].imag();
        });
        return acc / static_cast<double>(symbols.size());
    }
};

// Flattens in NCHW order and pairs consecutive reals as (re, im).
// The layout is part of the symbol-file contract: item-major, then
// channel-major, row-major within a channel, width fastest.
inline ComplexSymbolVector real_to_complex(const Tensor4<float>& f) {
    if (f.size() % 2 != 0)
        throw ShapeError("real_to_complex: element count " + std::to_string(f.size()) + " is odd");
    ComplexSymbolVector z;
    z.symbols.resize(f.size() / 2);
    const float* p = f.data();
    for (size_t i = 0; i < z.symbols.size(); ++i)
        z.symbols[i] = {p[2 * i], p[2 * i + 1]};
    return z;
}

inline Tensor4<float> complex_to_real(const ComplexSymbolVector& z, int b, int c, int h, int w) {
    Tensor4<float> f(b, c, h, w);
    if (f.size() != 2 * z.symbols.size())
        throw ShapeError("complex_to_real: " + std::to_string(z.symbols.size()) +
                         " symbols do not fill " + f.shape_str());
    float* p = f.data();
    for (size_t i = 0; i < z.symbols.size(); ++i) {
        p[2 * i] = z.symbols[i].real();
        p[2 * i + 1] = z.symbols[i].imag();
    }
    return f;
}

// z / sqrt(mean |z_i|^2), so the result has unit average symbol power.
inline ComplexSymbolVector power_normalize(const ComplexSymbolVector& z) {
    double p = z.power();
    if (!(p > 0.0))
        throw DegenerateInputError("power_normalize: zero-power signal");
    const float inv = static_cast<float>(1.0 / std::sqrt(p));
    ComplexSymbolVector out = z;
    for (auto& s : out.symbols) s *= inv;
    return out;
}

} // namespace sijscc
