// SPDX-License-Identifier: Apache-2.0
// Central finite-difference oracle for block gradients. Independent of the
// backward implementations it checks: only forward() is used on the numeric
// side.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sijscc/nn/layers.hpp"

namespace sijscc::test {

struct GradCheckReport {
    double max_rel_err = 0.0;
    size_t coords_checked = 0;
    std::string worst_coord;
};

inline Tensor4<double> random_tensor(int b, int c, int h, int w, Rng& rng, double lo = -1.0,
                                     double hi = 1.0) {
    Tensor4<double> t(b, c, h, w);
    for (size_t i = 0; i < t.size(); ++i) t.flat(i) = rng.next_range(lo, hi);
    return t;
}

// loss(out) = sum_i probe_i * out_i with a fixed random probe.
inline double probed_loss(const Tensor4<double>& out, const Tensor4<double>& probe) {
    double acc = 0.0;
    for (size_t i = 0; i < out.size(); ++i) acc += out.flat(i) * probe.flat(i);
    return acc;
}

// Checks d(loss)/d(param) for every parameter tensor and d(loss)/d(input),
// sampling up to max_coords coordinates per tensor.
inline GradCheckReport grad_check(nn::Block<double>& block, const Tensor4<double>& x,
                                  uint64_t seed, const nn::RunContext<double>& ctx_in = {},
                                  size_t max_coords = 24, double base_step = 1e-6) {
    nn::RunContext<double> ctx = ctx_in;
    ctx.grad = true;
    nn::RunContext<double> ctx_ng = ctx_in;
    ctx_ng.grad = false;

    std::vector<nn::ParamRef<double>> params;
    block.collect_params("p", params);
    zero_grads(params);

    Tensor4<double> x_mut = x;
    Tensor4<double> out = block.forward(x_mut, ctx);
    Rng prng(seed, 77);
    Tensor4<double> probe = random_tensor(out.b(), out.c(), out.h(), out.w(), prng);
    Tensor4<double> gx = block.backward(probe);

    GradCheckReport rep;
    Rng crng(seed, 78);
    auto eval_loss = [&]() { return probed_loss(block.forward(x_mut, ctx_ng), probe); };

    auto check_tensor = [&](Tensor4<double>& value, const Tensor4<double>& analytic,
                            const std::string& name) {
        std::vector<size_t> coords;
        if (value.size() <= max_coords) {
            for (size_t i = 0; i < value.size(); ++i) coords.push_back(i);
        } else {
            for (size_t i = 0; i < max_coords; ++i)
                coords.push_back(crng.next_below(value.size()));
        }
        for (size_t idx : coords) {
            const double orig = value.flat(idx);
            const double h = base_step * std::max(1.0, std::abs(orig));
            value.flat(idx) = orig + h;
            const double lp = eval_loss();
            value.flat(idx) = orig - h;
            const double lm = eval_loss();
            value.flat(idx) = orig;
            const double numeric = (lp - lm) / (2.0 * h);
            const double a = analytic.flat(idx);
            const double rel = std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
            ++rep.coords_checked;
            if (rel > rep.max_rel_err) {
                rep.max_rel_err = rel;
                rep.worst_coord = name + "[" + std::to_string(idx) + "] analytic=" +
                                  std::to_string(a) + " numeric=" + std::to_string(numeric);
            }
        }
    };

    for (auto& p : params) check_tensor(*p.value, *p.grad, p.name);
    check_tensor(x_mut, gx, "input");
    return rep;
}

} // namespace sijscc::test
