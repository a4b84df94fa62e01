// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sijscc/codec.hpp"

namespace sijscc {

struct LayerComplexity {
    std::string name;
    long long params = 0;
    long long macs = 0;
};

struct ComplexityReport {
    long long params = 0;
    long long macs = 0; // multiply-accumulates for one image of the stated size
    std::vector<LayerComplexity> per_layer;
};

// Conventions: convolution MACs are C_in*C_out*k^2 per output position
// (biases excluded); transposed convolutions count the same products at their
// input positions; the channel-coupling of (I)GDN counts as a C x C matmul
// per position; attention counts projection, score and aggregation terms.
long long conv_param_count(long long in_c, long long out_c, long long k);
long long conv_mac_count(long long in_c, long long out_c, long long k, long long positions);

ComplexityReport count_complexity(const ModelConfig& cfg, int h, int w,
                                  bool with_af_encoder = false, bool with_af_decoder = false);

// Per-position multiply ratio of the inverted bottleneck (dense 3x3 +
// 1x1 expansion + 1x1 restoration) against a three-conv_3x3 residual body of
// the same width: (9 + 2X)/27. The trailing 1x1 mix and the attention branch
// are outside the bottleneck and excluded, as is the bias term.
double irab_bottleneck_mac_ratio(int channels, int expansion, int h, int w);

std::string format_complexity_report(const ComplexityReport& rep, bool per_layer);

} // namespace sijscc
