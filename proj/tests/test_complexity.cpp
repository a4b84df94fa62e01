// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "sijscc/complexity.hpp"

using namespace sijscc;

TEST_CASE("single conv params: 3->192 3x3 with bias") {
    CHECK(conv_param_count(3, 192, 3) == 5376);
}

TEST_CASE("inverted bottleneck multiply ratio matches (9+2X)/27") {
    CHECK(irab_bottleneck_mac_ratio(192, 2, 32, 32) == doctest::Approx(13.0 / 27.0).epsilon(1e-12));
    CHECK(irab_bottleneck_mac_ratio(64, 4, 16, 16) == doctest::Approx(17.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("analytic parameter count equals the runtime-traced enumeration exactly") {
    for (int n : {16, 48, 64}) {
        ModelConfig cfg;
        cfg.n = n;
        ComplexityReport rep = count_complexity(cfg, 64, 64);
        Codec<float> codec(cfg);
        CHECK(rep.params == static_cast<long long>(codec.param_count()));
    }
    // with conditioning modules on both sides
    ModelConfig cfg;
    cfg.n = 48;
    BuildOptions opts;
    opts.snr_adaptive_encoder = true;
    opts.snr_adaptive_decoder = true;
    ComplexityReport rep = count_complexity(cfg, 64, 64, true, true);
    Codec<float> codec(cfg, opts);
    CHECK(rep.params == static_cast<long long>(codec.param_count()));
}

TEST_CASE("per-layer entries sum to the report totals") {
    ModelConfig cfg;
    cfg.n = 64;
    ComplexityReport rep = count_complexity(cfg, 128, 128);
    long long p = 0, m = 0;
    for (const auto& l : rep.per_layer) {
        p += l.params;
        m += l.macs;
    }
    CHECK(p == rep.params);
    CHECK(m == rep.macs);
}

TEST_CASE("desk anchor: n=64 parameters within 15% of 0.87M") {
    ModelConfig cfg;
    cfg.n = 64;
    ComplexityReport rep = count_complexity(cfg, 768, 512);
    CHECK(std::abs(rep.params / 1e6 - 0.87) / 0.87 < 0.15);
}

TEST_CASE("count_complexity rejects non-multiple-of-4 sizes") {
    ModelConfig cfg;
    CHECK_THROWS_AS(count_complexity(cfg, 102, 64), ShapeError);
}
