// SPDX-License-Identifier: Apache-2.0
#include "sijscc/complexity.hpp"

#include <sstream>

namespace sijscc {

long long conv_param_count(long long in_c, long long out_c, long long k) {
    return in_c * out_c * k * k + out_c;
}

long long conv_mac_count(long long in_c, long long out_c, long long k, long long positions) {
    return in_c * out_c * k * k * positions;
}

namespace {

struct Walker {
    ComplexityReport rep;

    void add(const std::string& name, long long params, long long macs) {
        rep.per_layer.push_back({name, params, macs});
        rep.params += params;
        rep.macs += macs;
    }

    void add_conv(const std::string& name, long long in_c, long long out_c, long long k,
                  long long positions) {
        add(name, conv_param_count(in_c, out_c, k), conv_mac_count(in_c, out_c, k, positions));
    }

    void add_gdn(const std::string& name, long long c, long long positions) {
        add(name, c + c * c, c * c * positions);
    }

    // ESA geometry: 1x1 reduce to 16, stride-2 3x3, max-pool k7 s3 p3,
    // one 3x3 at pooled size, bilinear restore, 1x1 expand back.
    void add_esa(const std::string& name, long long c, long long h, long long w) {
        const long long hw = h * w;
        const long long h2 = (h + 1) / 2, w2 = (w + 1) / 2;
        const long long hp = (h2 - 1) / 3 + 1, wp = (w2 - 1) / 3 + 1;
        add_conv(name + ".reduce", c, 16, 1, hw);
        add_conv(name + ".down", 16, 16, 3, h2 * w2);
        add_conv(name + ".body", 16, 16, 3, hp * wp);
        add_conv(name + ".restore", 16, c, 1, hw);
    }

    void add_irab(const std::string& name, long long in_c, long long out_c, long long x,
                  long long h, long long w) {
        const long long hw = h * w;
        add_conv(name + ".dense", in_c, in_c, 3, hw);
        add_conv(name + ".expand", in_c, x * in_c, 1, hw);
        add_conv(name + ".restore", x * in_c, out_c, 1, hw);
        add_conv(name + ".mix", out_c, out_c, 1, hw);
        add_esa(name + ".esa", out_c, h, w);
        if (in_c != out_c) add_conv(name + ".proj", in_c, out_c, 1, hw);
    }

    void add_acmix(const std::string& name, long long c, long long k, long long h, long long w) {
        const long long p = h * w;
        add_conv(name + ".query", c, c, 1, p);
        add_conv(name + ".key", c, c, 1, p);
        add_conv(name + ".value", c, c, 1, p);
        add_conv(name + ".out", c, c, 1, p);
        add_conv(name + ".conv_fc", 3 * c, k * k * c, 1, p);
        add(name + ".attention", 0, 2 * p * p * c); // scores + aggregation
        add(name + ".shift", 0, k * k * c * p);
        add(name + ".gates", 2, 0); // the two path weights
    }

    void add_af(const std::string& name, long long c) {
        const long long hidden = std::max<long long>(4, c / 16);
        add_conv(name + ".fc1", c + 1, hidden, 1, 1);
        add_conv(name + ".fc2", hidden, c, 1, 1);
    }

    void walk(const std::vector<LayerSpec>& plan, const std::string& prefix, long long h,
              long long w, bool decoder) {
        for (const auto& ls : plan) {
            const std::string name = prefix + "." + ls.name;
            switch (ls.kind) {
            case LayerKind::ConvDown: {
                const long long ho = (h - 1) / 2 + 1, wo = (w - 1) / 2 + 1;
                add_conv(name, ls.in_c, ls.out_c, 3, ho * wo);
                h = ho;
                w = wo;
                break;
            }
            case LayerKind::ConvUp:
                add_conv(name, ls.in_c, ls.out_c, 3, h * w);
                h *= 2;
                w *= 2;
                break;
            case LayerKind::Gdn:
            case LayerKind::Igdn:
                add_gdn(name, ls.in_c, h * w);
                break;
            case LayerKind::Irab:
                add_irab(name, ls.in_c, ls.out_c, ls.expansion, h, w);
                break;
            case LayerKind::Acmix:
                add_acmix(name, ls.in_c, ls.kernel, h, w);
                break;
            case LayerKind::Af:
                add_af(name, ls.in_c);
                break;
            }
        }
        (void)decoder;
    }
};

} // namespace

ComplexityReport count_complexity(const ModelConfig& cfg, int h, int w, bool with_af_encoder,
                                  bool with_af_decoder) {
    cfg.validate();
    if (h % 4 != 0 || w % 4 != 0)
        throw ShapeError("count_complexity: dims must be divisible by 4");
    Walker walker;
    walker.walk(encoder_plan(cfg, with_af_encoder), "enc", h, w, false);
    walker.walk(decoder_plan(cfg, with_af_decoder), "dec", h / 4, w / 4, true);
    return walker.rep;
}

double irab_bottleneck_mac_ratio(int channels, int expansion, int h, int w) {
    const long long hw = static_cast<long long>(h) * w;
    const long long bottleneck =
        conv_mac_count(channels, channels, 3, hw) +
        conv_mac_count(channels, static_cast<long long>(expansion) * channels, 1, hw) +
        conv_mac_count(static_cast<long long>(expansion) * channels, channels, 1, hw);
    const long long reference = 3 * conv_mac_count(channels, channels, 3, hw);
    return static_cast<double>(bottleneck) / static_cast<double>(reference);
}

std::string format_complexity_report(const ComplexityReport& rep, bool per_layer) {
    std::ostringstream os;
    if (per_layer) {
        os << "layer                                    params           MACs\n";
        for (const auto& l : rep.per_layer) {
            os << l.name;
            for (size_t i = l.name.size(); i < 40; ++i) os << ' ';
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%10lld %14lld\n", l.params, l.macs);
            os << buf;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "total params: %lld (%.3f M)\ntotal MACs:   %lld (%.2f G)\n",
                  rep.params, rep.params / 1e6, rep.macs, rep.macs / 1e9);
    os << buf;
    return os.str();
}

} // namespace sijscc
