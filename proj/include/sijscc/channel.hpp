// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "sijscc/symbols.hpp"

namespace sijscc {

enum class ChannelKind { Awgn, Rayleigh, Rician };

const char* channel_kind_name(ChannelKind k);
ChannelKind channel_kind_from_name(const std::string& s);

// Immutable description of the simulated medium. Each transmit call derives
// an independent noise stream from (seed, nonce), so a spec can be shared
// across threads and replayed exactly.
struct ChannelSpec {
    ChannelKind kind = ChannelKind::Awgn;
    double snr_db = 10.0;
    double rician_k = 0.0; // LOS/scatter power ratio, Rician only
    uint64_t seed = 0;

    void validate() const;
};

// Complex-noise variance per symbol for a unit-power signal:
// sigma^2 = 10^(-snr_db/10). Each real component gets sigma^2/2.
double snr_to_sigma2(double snr_db);

// One complex noise sample, addressed by symbol index. Exposed so tests and
// the training path can reproduce exactly what transmit_awgn adds.
std::complex<float> awgn_noise_at(double sigma2, uint64_t seed, uint64_t nonce, size_t index);

// Adds the same noise stream directly to interleaved (re, im) reals. Used by
// the training loop on latent tensors; bit-identical to transmit_awgn.
void add_awgn_to_reals(float* reals, size_t n_reals, double sigma2, uint64_t seed,
                       uint64_t nonce);

// zhat_i = z_i + w_i. The input must be power-normalized (|power - 1| <= 1e-3),
// otherwise the stated SNR would be meaningless; violations throw ContractError.
ComplexSymbolVector transmit_awgn(const ComplexSymbolVector& z, const ChannelSpec& spec,
                                  uint64_t nonce = 0);

struct FadedSymbols {
    ComplexSymbolVector symbols;
    std::complex<double> fade; // flat coefficient, recorded for equalization
};

// zhat = h*z + w with one flat fading coefficient per vector.
// Rayleigh: h ~ CN(0,1). Rician: fixed unit LOS mixed by rician_k.
FadedSymbols transmit_fading(const ComplexSymbolVector& z, const ChannelSpec& spec,
                             uint64_t nonce = 0);

// Perfect-CSI equalization: divide received symbols by the fade coefficient.
ComplexSymbolVector equalize(const FadedSymbols& rx);

// Routes to transmit_awgn or transmit_fading per spec.kind; AWGN reports h=1.
FadedSymbols transmit(const ComplexSymbolVector& z, const ChannelSpec& spec, uint64_t nonce = 0);

} // namespace sijscc
