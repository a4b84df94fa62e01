// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sijscc/nn/blocks.hpp"
#include "sijscc/symbols.hpp"

namespace sijscc {

// Architecture hyperparameters. The encoder downsamples twice (stride 2), so
// a c-channel input of n = h*w*c source values maps to k = t*n/(2*16*c)
// complex symbols; for RGB the bandwidth ratio k/n is t/96.
struct ModelConfig {
    int n = 192;            // feature width
    int t = 16;             // latent (transmitted) width
    int heads = 4;          // attention heads in the hybrid block
    int acmix_kernel = 3;   // convolution-path kernel in the hybrid block
    int input_channels = 3;
    // Bottleneck expansion per residual block, in encoder order. The first
    // stage1_blocks entries run at half resolution between the two
    // downsampling convolutions; the rest run at quarter resolution and the
    // final one projects to t channels.
    std::vector<int> encoder_expansions = {2, 2, 4, 4, 4, 4};
    int stage1_blocks = 2;

    void validate() const {
        if (n < 16) throw ConfigError("ModelConfig: n must be >= 16");
        if (t < 1) throw ConfigError("ModelConfig: t must be positive");
        if (input_channels < 1) throw ConfigError("ModelConfig: input_channels must be positive");
        if (heads < 1 || t % heads != 0)
            throw ConfigError("ModelConfig: heads must divide t");
        if (acmix_kernel < 1 || acmix_kernel % 2 == 0)
            throw ConfigError("ModelConfig: acmix_kernel must be odd");
        if (stage1_blocks < 0 || stage1_blocks + 1 > static_cast<int>(encoder_expansions.size()))
            throw ConfigError("ModelConfig: need at least one block after the second downsampling");
        for (int x : encoder_expansions)
            if (x < 1) throw ConfigError("ModelConfig: expansion factors must be >= 1");
    }

    double ratio() const { return static_cast<double>(t) / (32.0 * input_channels); }

    // ratio as a reduced fraction, e.g. 16/96 -> 1/6
    std::pair<long, long> ratio_fraction() const {
        long num = t, den = 32L * input_channels;
        long g = std::gcd(num, den);
        return {num / g, den / g};
    }

    size_t symbols_per_image(int h, int w) const {
        return static_cast<size_t>(h) * w * t / 32;
    }
};

struct BuildOptions {
    bool snr_adaptive_encoder = false;
    bool snr_adaptive_decoder = false;
};

// ---- architecture plan ------------------------------------------------------
// One flat description of the layer stack, shared by the model builder and
// the analytic complexity counter.

enum class LayerKind { ConvDown, Gdn, Igdn, Irab, Acmix, ConvUp, Af };

struct LayerSpec {
    LayerKind kind;
    std::string name;
    int in_c = 0, out_c = 0;
    int expansion = 0;        // Irab
    int heads = 0, kernel = 0; // Acmix
};

inline std::vector<LayerSpec> encoder_plan(const ModelConfig& cfg, bool with_af = false) {
    cfg.validate();
    std::vector<LayerSpec> plan;
    plan.push_back({LayerKind::ConvDown, "conv_in", cfg.input_channels, cfg.n});
    plan.push_back({LayerKind::Gdn, "gdn_in", cfg.n, cfg.n});
    const int total = static_cast<int>(cfg.encoder_expansions.size());
    int irab_idx = 0, af_idx = 0;
    auto push_irab = [&](int in_c, int out_c, int x) {
        ++irab_idx;
        plan.push_back({LayerKind::Irab, "irab" + std::to_string(irab_idx), in_c, out_c, x});
        if (with_af && (irab_idx == 2 || irab_idx == 4)) {
            ++af_idx;
            plan.push_back({LayerKind::Af, "af" + std::to_string(af_idx), out_c, out_c});
        }
    };
    for (int i = 0; i < cfg.stage1_blocks; ++i)
        push_irab(cfg.n, cfg.n, cfg.encoder_expansions[i]);
    plan.push_back({LayerKind::ConvDown, "conv_mid", cfg.n, cfg.n});
    plan.push_back({LayerKind::Gdn, "gdn_mid", cfg.n, cfg.n});
    for (int i = cfg.stage1_blocks; i < total; ++i) {
        const bool last = (i == total - 1);
        push_irab(cfg.n, last ? cfg.t : cfg.n, cfg.encoder_expansions[i]);
    }
    plan.push_back({LayerKind::Acmix, "attn", cfg.t, cfg.t, 0, cfg.heads, cfg.acmix_kernel});
    return plan;
}

inline std::vector<LayerSpec> decoder_plan(const ModelConfig& cfg, bool with_af = false) {
    cfg.validate();
    std::vector<LayerSpec> plan;
    plan.push_back({LayerKind::Acmix, "attn", cfg.t, cfg.t, 0, cfg.heads, cfg.acmix_kernel});
    const int total = static_cast<int>(cfg.encoder_expansions.size());
    int irab_idx = 0, af_idx = 0;
    auto push_irab = [&](int in_c, int out_c, int x) {
        ++irab_idx;
        plan.push_back({LayerKind::Irab, "irab" + std::to_string(irab_idx), in_c, out_c, x});
        if (with_af && (irab_idx == 2 || irab_idx == 4)) {
            ++af_idx;
            plan.push_back({LayerKind::Af, "af" + std::to_string(af_idx), out_c, out_c});
        }
    };
    // mirror of the encoder's quarter-resolution stage
    for (int i = total - 1; i >= cfg.stage1_blocks; --i) {
        const bool first = (i == total - 1);
        push_irab(first ? cfg.t : cfg.n, cfg.n, cfg.encoder_expansions[i]);
    }
    plan.push_back({LayerKind::Igdn, "gdn_mid", cfg.n, cfg.n});
    plan.push_back({LayerKind::ConvUp, "conv_mid", cfg.n, cfg.n});
    for (int i = cfg.stage1_blocks - 1; i >= 0; --i)
        push_irab(cfg.n, cfg.n, cfg.encoder_expansions[i]);
    plan.push_back({LayerKind::Igdn, "gdn_out", cfg.n, cfg.n});
    plan.push_back({LayerKind::ConvUp, "conv_out", cfg.n, cfg.input_channels});
    return plan;
}

template <typename S>
std::unique_ptr<nn::Block<S>> make_layer(const LayerSpec& ls) {
    switch (ls.kind) {
    case LayerKind::ConvDown:
        return std::make_unique<nn::Conv2d<S>>(ls.in_c, ls.out_c, 3, 2, 1);
    case LayerKind::Gdn:
        return std::make_unique<nn::Gdn<S>>(ls.in_c, false);
    case LayerKind::Igdn:
        return std::make_unique<nn::Gdn<S>>(ls.in_c, true);
    case LayerKind::Irab:
        return std::make_unique<nn::Irab<S>>(ls.in_c, ls.out_c, ls.expansion);
    case LayerKind::Acmix:
        return std::make_unique<nn::Acmix<S>>(ls.in_c, ls.heads, ls.kernel);
    case LayerKind::ConvUp:
        return std::make_unique<nn::ConvTranspose2d<S>>(ls.in_c, ls.out_c, 3, 2, 1, 1);
    case LayerKind::Af:
        return std::make_unique<nn::AfModule<S>>(ls.in_c);
    }
    throw ConfigError("make_layer: unknown layer kind");
}

// ---- per-item power normalization of the latent ------------------------------
// Scales each item so its complex symbols have unit average power, i.e. the
// mean square over the item's reals is 1/2. Differentiable.

template <typename S>
struct PowerNorm {
    std::vector<double> scales; // s per item; y = f / s

    Tensor4<S> forward(const Tensor4<S>& f) {
        const size_t m = f.item_size(); // 2k reals per item
        Tensor4<S> y = f;
        scales.assign(f.b(), 0.0);
        for (int n = 0; n < f.b(); ++n) {
            double ss = pairwise_accumulate(0, m, [&](size_t i) {
                double v = f.item(n)[i];
                return v * v;
            });
            double s = std::sqrt(ss / (static_cast<double>(m) / 2.0));
            if (!(s > 0.0))
                throw DegenerateInputError("PowerNorm: zero-power latent");
            scales[n] = s;
            S inv = static_cast<S>(1.0 / s);
            S* p = y.item(n);
            for (size_t i = 0; i < m; ++i) p[i] *= inv;
        }
        return y;
    }

    // g: gradient w.r.t. normalized output y; y: the normalized output
    Tensor4<S> backward(const Tensor4<S>& g, const Tensor4<S>& y) const {
        const size_t m = g.item_size();
        const double k = static_cast<double>(m) / 2.0;
        Tensor4<S> gf = g;
        for (int n = 0; n < g.b(); ++n) {
            const S* gp = g.item(n);
            const S* yp = y.item(n);
            double dot = 0.0;
            for (size_t i = 0; i < m; ++i) dot += static_cast<double>(gp[i]) * yp[i];
            const double inv_s = 1.0 / scales[n];
            S* out = gf.item(n);
            for (size_t i = 0; i < m; ++i)
                out[i] = static_cast<S>((gp[i] - yp[i] * (dot / k)) * inv_s);
        }
        return gf;
    }
};

// ---- the codec ---------------------------------------------------------------

template <typename S>
class Codec {
public:
    explicit Codec(ModelConfig cfg, BuildOptions opts = {}) : cfg_(cfg), opts_(opts) {
        cfg_.validate();
        for (const auto& ls : encoder_plan(cfg_, opts.snr_adaptive_encoder))
            encoder_.add(ls.name, make_layer<S>(ls));
        for (const auto& ls : decoder_plan(cfg_, opts.snr_adaptive_decoder))
            decoder_.add(ls.name, make_layer<S>(ls));
    }

    void init_weights(uint64_t seed) {
        Rng rng(seed, /*stream=*/1);
        encoder_.init(rng);
        decoder_.init(rng);
    }

    const ModelConfig& config() const { return cfg_; }
    const BuildOptions& options() const { return opts_; }
    nn::Sequential<S>& encoder() { return encoder_; }
    nn::Sequential<S>& decoder() { return decoder_; }

    std::vector<nn::ParamRef<S>> params() {
        std::vector<nn::ParamRef<S>> out;
        encoder_.collect_params("enc", out);
        decoder_.collect_params("dec", out);
        return out;
    }
    size_t param_count() { return nn::count_params(params()); }

    // Runs the encoder; checks the contract on the image tensor.
    Tensor4<S> encode_features(const Tensor4<S>& x, const nn::RunContext<S>& ctx) {
        check_image(x);
        return encoder_.forward(x, ctx);
    }

    Tensor4<S> decode_features(const Tensor4<S>& latent, const nn::RunContext<S>& ctx) {
        return decoder_.forward(latent, ctx);
    }

    // Image -> unit-power complex symbols (inference path, one item).
    ComplexSymbolVector encode(const Tensor4<S>& x) {
        nn::RunContext<S> ctx;
        ctx.grad = false;
        std::vector<double> snr_zero(x.b(), 0.0);
        if (opts_.snr_adaptive_encoder) ctx.snr_db = &snr_zero; // caller uses encode_with_snr
        Tensor4<S> f = encode_features(x, ctx);
        PowerNorm<S> norm;
        Tensor4<S> y = norm.forward(f);
        return real_to_complex(y.template cast<float>());
    }

    ComplexSymbolVector encode_with_snr(const Tensor4<S>& x, double snr_db) {
        nn::RunContext<S> ctx;
        ctx.grad = false;
        std::vector<double> snr(x.b(), snr_db);
        ctx.snr_db = &snr;
        Tensor4<S> f = encode_features(x, ctx);
        PowerNorm<S> norm;
        Tensor4<S> y = norm.forward(f);
        return real_to_complex(y.template cast<float>());
    }

    // Symbols -> image in [0,1] of shape (input_channels, h, w).
    Tensor4<S> decode(const ComplexSymbolVector& z, int h, int w,
                      std::optional<double> snr_db = std::nullopt) {
        if (h % 4 != 0 || w % 4 != 0)
            throw ShapeError("decode: target dims must be divisible by 4");
        if (z.k() != cfg_.symbols_per_image(h, w))
            throw ShapeError("decode: got " + std::to_string(z.k()) + " symbols, expected " +
                             std::to_string(cfg_.symbols_per_image(h, w)));
        Tensor4<float> latent_f = complex_to_real(z, 1, cfg_.t, h / 4, w / 4);
        Tensor4<S> latent = latent_f.template cast<S>();
        nn::RunContext<S> ctx;
        ctx.grad = false;
        std::vector<double> snr(1, snr_db.value_or(0.0));
        if (opts_.snr_adaptive_decoder) ctx.snr_db = &snr;
        Tensor4<S> out = decode_features(latent, ctx);
        for (size_t i = 0; i < out.size(); ++i)
            out.flat(i) = std::min(S(1), std::max(S(0), out.flat(i)));
        return out;
    }

private:
    void check_image(const Tensor4<S>& x) const {
        if (x.c() != cfg_.input_channels)
            throw ConfigError("encode: expected " + std::to_string(cfg_.input_channels) +
                              " input channels, got " + x.shape_str());
        if (x.h() % 4 != 0 || x.w() % 4 != 0)
            throw ShapeError("encode: dims must be divisible by 4 (no implicit padding), got " +
                             x.shape_str());
        for (size_t i = 0; i < x.size(); ++i) {
            S v = x.flat(i);
            if (!(v >= S(-1e-6) && v <= S(1) + S(1e-6)))
                throw ContractError("encode: pixel values outside [0,1]");
        }
    }

    ModelConfig cfg_;
    BuildOptions opts_;
    nn::Sequential<S> encoder_;
    nn::Sequential<S> decoder_;
};

} // namespace sijscc
