// SPDX-License-Identifier: Apache-2.0
#include "sijscc/channel.hpp"

#include <cmath>

#include "sijscc/rng.hpp"

namespace sijscc {

namespace {

// Noise draws live in their own stream namespace so they can never collide
// with weight-init or data-order draws made from the same user seed.
constexpr uint64_t kNoiseStreamTag = 0x6368616E6E656CULL; // "channel"
constexpr uint64_t kFadeStreamTag = 0x66616465ULL;        // "fade"

uint64_t noise_stream(uint64_t nonce) { return mix64(kNoiseStreamTag ^ nonce); }
uint64_t fade_stream(uint64_t nonce) { return mix64(kFadeStreamTag ^ nonce); }

} // namespace

const char* channel_kind_name(ChannelKind k) {
    switch (k) {
    case ChannelKind::Awgn: return "awgn";
    case ChannelKind::Rayleigh: return "rayleigh";
    case ChannelKind::Rician: return "rician";
    }
    return "?";
}

ChannelKind channel_kind_from_name(const std::string& s) {
    if (s == "awgn") return ChannelKind::Awgn;
    if (s == "rayleigh") return ChannelKind::Rayleigh;
    if (s == "rician") return ChannelKind::Rician;
    throw ConfigError("unknown channel kind: " + s);
}

void ChannelSpec::validate() const {
    if (!std::isfinite(snr_db)) throw ConfigError("ChannelSpec: snr_db must be finite");
    if (rician_k < 0.0) throw ConfigError("ChannelSpec: rician_k must be >= 0");
}

double snr_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

std::complex<float> awgn_noise_at(double sigma2, uint64_t seed, uint64_t nonce, size_t index) {
    double g0, g1;
    gaussian_pair_at(seed, noise_stream(nonce), index, g0, g1);
    const double amp = std::sqrt(sigma2 / 2.0);
    return {static_cast<float>(amp * g0), static_cast<float>(amp * g1)};
}

void add_awgn_to_reals(float* reals, size_t n_reals, double sigma2, uint64_t seed,
                       uint64_t nonce) {
    if (sigma2 <= 0.0) return;
    const size_t n_sym = n_reals / 2;
    for (size_t i = 0; i < n_sym; ++i) {
        std::complex<float> w = awgn_noise_at(sigma2, seed, nonce, i);
        reals[2 * i] += w.real();
        reals[2 * i + 1] += w.imag();
    }
}

namespace {

void check_unit_power(const ComplexSymbolVector& z) {
    double p = z.power();
    if (std::abs(p - 1.0) > 1e-3)
        throw ContractError("transmit: input power " + std::to_string(p) +
                            " deviates from 1 by more than 1e-3");
}

ComplexSymbolVector add_noise(const ComplexSymbolVector& z, double sigma2, uint64_t seed,
                              uint64_t nonce) {
    ComplexSymbolVector out = z;
    if (sigma2 <= 0.0) return out;
    for (size_t i = 0; i < out.symbols.size(); ++i)
        out.symbols[i] += awgn_noise_at(sigma2, seed, nonce, i);
    return out;
}

} // namespace

ComplexSymbolVector transmit_awgn(const ComplexSymbolVector& z, const ChannelSpec& spec,
                                  uint64_t nonce) {
    spec.validate();
    check_unit_power(z);
    return add_noise(z, snr_to_sigma2(spec.snr_db), spec.seed, nonce);
}

FadedSymbols transmit_fading(const ComplexSymbolVector& z, const ChannelSpec& spec,
                             uint64_t nonce) {
    spec.validate();
    check_unit_power(z);
    double g0, g1;
    gaussian_pair_at(spec.seed, fade_stream(nonce), 0, g0, g1);
    std::complex<double> h;
    if (spec.kind == ChannelKind::Rayleigh) {
        h = std::complex<double>(g0, g1) * std::sqrt(0.5);
    } else { // Rician: unit LOS plus scattered component, E|h|^2 = 1
        const double k = spec.rician_k;
        const double los = std::sqrt(k / (k + 1.0));
        const double scatter = std::sqrt(1.0 / (k + 1.0));
        h = std::complex<double>(los, 0.0) +
            scatter * std::sqrt(0.5) * std::complex<double>(g0, g1);
    }
    FadedSymbols rx;
    rx.fade = h;
    rx.symbols = z;
    const std::complex<float> hf(static_cast<float>(h.real()), static_cast<float>(h.imag()));
    for (auto& s : rx.symbols.symbols) s *= hf;
    rx.symbols = add_noise(rx.symbols, snr_to_sigma2(spec.snr_db), spec.seed, nonce);
    return rx;
}

ComplexSymbolVector equalize(const FadedSymbols& rx) {
    ComplexSymbolVector out = rx.symbols;
    const std::complex<float> h(static_cast<float>(rx.fade.real()),
                                static_cast<float>(rx.fade.imag()));
    for (auto& s : out.symbols) s /= h;
    return out;
}

FadedSymbols transmit(const ComplexSymbolVector& z, const ChannelSpec& spec, uint64_t nonce) {
    if (spec.kind == ChannelKind::Awgn) {
        FadedSymbols rx;
        rx.fade = {1.0, 0.0};
        rx.symbols = transmit_awgn(z, spec, nonce);
        return rx;
    }
    return transmit_fading(z, spec, nonce);
}

} // namespace sijscc
