// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/SpecialFunctions>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sijscc/tensor.hpp"

namespace sijscc::nn {

template <typename S>
using MatRM = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using MapMat = Eigen::Map<MatRM<S>>;
template <typename S>
using CMapMat = Eigen::Map<const MatRM<S>>;

inline int conv_out_dim(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

// ---- im2col / col2im ------------------------------------------------------
// col has shape [c*k*k, ho*wo]; plane is one item's [c,h,w] block.

template <typename S>
void im2col(const S* plane, int c, int h, int w, int k, int stride, int pad, S* col) {
    const int ho = conv_out_dim(h, k, stride, pad);
    const int wo = conv_out_dim(w, k, stride, pad);
    for (int ci = 0; ci < c; ++ci) {
        const S* src = plane + static_cast<size_t>(ci) * h * w;
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                S* dst = col + (static_cast<size_t>(ci) * k * k + ky * k + kx) *
                                   (static_cast<size_t>(ho) * wo);
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= h) {
                        std::fill(dst, dst + wo, S(0));
                        dst += wo;
                        continue;
                    }
                    const S* row = src + static_cast<size_t>(iy) * w;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride - pad + kx;
                        dst[ox] = (ix >= 0 && ix < w) ? row[ix] : S(0);
                    }
                    dst += wo;
                }
            }
        }
    }
}

// Adjoint of im2col: scatter-adds col back onto the [c,h,w] plane.
template <typename S>
void col2im_add(const S* col, int c, int h, int w, int k, int stride, int pad, S* plane) {
    const int ho = conv_out_dim(h, k, stride, pad);
    const int wo = conv_out_dim(w, k, stride, pad);
    for (int ci = 0; ci < c; ++ci) {
        S* dst = plane + static_cast<size_t>(ci) * h * w;
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const S* src = col + (static_cast<size_t>(ci) * k * k + ky * k + kx) *
                                         (static_cast<size_t>(ho) * wo);
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= h) {
                        src += wo;
                        continue;
                    }
                    S* row = dst + static_cast<size_t>(iy) * w;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride - pad + kx;
                        if (ix >= 0 && ix < w) row[ix] += src[ox];
                    }
                    src += wo;
                }
            }
        }
    }
}

// ---- max pooling -----------------------------------------------------------
// Padding is treated as -inf; argmax indices (flat y*w+x) are recorded for the
// backward pass.

template <typename S>
void maxpool_forward(const Tensor4<S>& x, int k, int stride, int pad,
                     Tensor4<S>& out, std::vector<int32_t>& argmax) {
    const int ho = conv_out_dim(x.h(), k, stride, pad);
    const int wo = conv_out_dim(x.w(), k, stride, pad);
    out = Tensor4<S>(x.b(), x.c(), ho, wo);
    argmax.assign(out.size(), -1);
    for (int n = 0; n < x.b(); ++n) {
        for (int c = 0; c < x.c(); ++c) {
            for (int oy = 0; oy < ho; ++oy) {
                for (int ox = 0; ox < wo; ++ox) {
                    S best = -std::numeric_limits<S>::infinity();
                    int32_t best_idx = -1;
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = oy * stride - pad + ky;
                        if (iy < 0 || iy >= x.h()) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            const int ix = ox * stride - pad + kx;
                            if (ix < 0 || ix >= x.w()) continue;
                            S v = x(n, c, iy, ix);
                            if (v > best) {
                                best = v;
                                best_idx = iy * x.w() + ix;
                            }
                        }
                    }
                    out(n, c, oy, ox) = best;
                    argmax[((static_cast<size_t>(n) * x.c() + c) * ho + oy) * wo + ox] = best_idx;
                }
            }
        }
    }
}

template <typename S>
Tensor4<S> maxpool_backward(const Tensor4<S>& gout, const std::vector<int32_t>& argmax,
                            int in_h, int in_w) {
    Tensor4<S> gx(gout.b(), gout.c(), in_h, in_w);
    for (int n = 0; n < gout.b(); ++n) {
        for (int c = 0; c < gout.c(); ++c) {
            S* plane = gx.item(n) + static_cast<size_t>(c) * in_h * in_w;
            const size_t base = (static_cast<size_t>(n) * gout.c() + c) *
                                gout.h() * gout.w();
            for (int i = 0; i < gout.h() * gout.w(); ++i) {
                int32_t idx = argmax[base + i];
                if (idx >= 0) plane[idx] += gout.item(n)[static_cast<size_t>(c) * gout.h() * gout.w() + i];
            }
        }
    }
    return gx;
}

// ---- bilinear resize -------------------------------------------------------
// Half-pixel-center convention; source coordinates are clamped at the border.

struct ResizeTap {
    int y0, y1, x0, x1;
    double wy, wx; // weight of y1 / x1
};

inline ResizeTap resize_tap(int oy, int ox, int ih, int iw, int oh, int ow) {
    ResizeTap t;
    double sy = (oy + 0.5) * (static_cast<double>(ih) / oh) - 0.5;
    double sx = (ox + 0.5) * (static_cast<double>(iw) / ow) - 0.5;
    sy = std::min(std::max(sy, 0.0), static_cast<double>(ih - 1));
    sx = std::min(std::max(sx, 0.0), static_cast<double>(iw - 1));
    t.y0 = static_cast<int>(sy);
    t.x0 = static_cast<int>(sx);
    t.y1 = std::min(t.y0 + 1, ih - 1);
    t.x1 = std::min(t.x0 + 1, iw - 1);
    t.wy = sy - t.y0;
    t.wx = sx - t.x0;
    return t;
}

template <typename S>
Tensor4<S> bilinear_resize(const Tensor4<S>& x, int oh, int ow) {
    Tensor4<S> out(x.b(), x.c(), oh, ow);
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            ResizeTap t = resize_tap(oy, ox, x.h(), x.w(), oh, ow);
            for (int n = 0; n < x.b(); ++n) {
                for (int c = 0; c < x.c(); ++c) {
                    double v = (1 - t.wy) * ((1 - t.wx) * x(n, c, t.y0, t.x0) +
                                             t.wx * x(n, c, t.y0, t.x1)) +
                               t.wy * ((1 - t.wx) * x(n, c, t.y1, t.x0) +
                                       t.wx * x(n, c, t.y1, t.x1));
                    out(n, c, oy, ox) = static_cast<S>(v);
                }
            }
        }
    }
    return out;
}

template <typename S>
Tensor4<S> bilinear_resize_backward(const Tensor4<S>& gout, int ih, int iw) {
    Tensor4<S> gx(gout.b(), gout.c(), ih, iw);
    for (int oy = 0; oy < gout.h(); ++oy) {
        for (int ox = 0; ox < gout.w(); ++ox) {
            ResizeTap t = resize_tap(oy, ox, ih, iw, gout.h(), gout.w());
            for (int n = 0; n < gout.b(); ++n) {
                for (int c = 0; c < gout.c(); ++c) {
                    S g = gout(n, c, oy, ox);
                    gx(n, c, t.y0, t.x0) += static_cast<S>((1 - t.wy) * (1 - t.wx)) * g;
                    gx(n, c, t.y0, t.x1) += static_cast<S>((1 - t.wy) * t.wx) * g;
                    gx(n, c, t.y1, t.x0) += static_cast<S>(t.wy * (1 - t.wx)) * g;
                    gx(n, c, t.y1, t.x1) += static_cast<S>(t.wy * t.wx) * g;
                }
            }
        }
    }
    return gx;
}

} // namespace sijscc::nn
