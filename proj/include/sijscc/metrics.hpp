// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sijscc/errors.hpp"
#include "sijscc/tensor.hpp"

namespace sijscc {

// One evaluation point of an SNR sweep.
struct MetricsRecord {
    std::string dataset_id;
    double snr_db = 0.0;
    long ratio_num = 0, ratio_den = 1; // bandwidth ratio k/n as a reduced fraction
    double psnr_db = 0.0;              // +inf sentinel for exact reconstruction
    double ssim = 0.0;
    int n_images = 0;
};

template <typename S>
double mse(const Tensor4<S>& x, const Tensor4<S>& xhat) {
    if (!x.same_shape(xhat))
        throw ShapeError("mse: shape mismatch " + x.shape_str() + " vs " + xhat.shape_str());
    if (x.size() == 0) throw ShapeError("mse: empty tensors");
    return pairwise_accumulate(0, x.size(), [&](size_t i) {
        const double d = static_cast<double>(x.flat(i)) - static_cast<double>(xhat.flat(i));
        return d * d;
    }) / static_cast<double>(x.size());
}

// 10*log10(max^2/mse); exact match reports +infinity rather than dividing by 0.
template <typename S>
double psnr(const Tensor4<S>& x, const Tensor4<S>& xhat, double max_val = 1.0) {
    if (max_val <= 0.0) throw ConfigError("psnr: max_val must be positive");
    const double m = mse(x, xhat);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(max_val * max_val / m);
}

namespace detail {

inline std::array<double, 11> ssim_window() {
    std::array<double, 11> w{};
    const double sigma = 1.5;
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5.0;
        w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += w[i];
    }
    for (auto& v : w) v /= sum;
    return w;
}

// Valid-mode separable filtering of one plane into (h-10) x (w-10).
template <typename S>
void ssim_filter_plane(const S* plane, int h, int w, const std::array<double, 11>& win,
                       std::vector<double>& tmp, std::vector<double>& out,
                       bool square = false) {
    const int wo = w - 10, ho = h - 10;
    tmp.assign(static_cast<size_t>(h) * wo, 0.0);
    for (int y = 0; y < h; ++y)
        for (int ox = 0; ox < wo; ++ox) {
            double acc = 0.0;
            const S* row = plane + static_cast<size_t>(y) * w + ox;
            for (int i = 0; i < 11; ++i) {
                double v = static_cast<double>(row[i]);
                acc += win[i] * (square ? v * v : v);
            }
            tmp[static_cast<size_t>(y) * wo + ox] = acc;
        }
    out.assign(static_cast<size_t>(ho) * wo, 0.0);
    for (int oy = 0; oy < ho; ++oy)
        for (int ox = 0; ox < wo; ++ox) {
            double acc = 0.0;
            for (int i = 0; i < 11; ++i) acc += win[i] * tmp[static_cast<size_t>(oy + i) * wo + ox];
            out[static_cast<size_t>(oy) * wo + ox] = acc;
        }
}

template <typename S>
void ssim_filter_product(const S* a, const S* b, int h, int w,
                         const std::array<double, 11>& win, std::vector<double>& tmp,
                         std::vector<double>& out) {
    const int wo = w - 10, ho = h - 10;
    tmp.assign(static_cast<size_t>(h) * wo, 0.0);
    for (int y = 0; y < h; ++y)
        for (int ox = 0; ox < wo; ++ox) {
            double acc = 0.0;
            const S* ra = a + static_cast<size_t>(y) * w + ox;
            const S* rb = b + static_cast<size_t>(y) * w + ox;
            for (int i = 0; i < 11; ++i)
                acc += win[i] * static_cast<double>(ra[i]) * static_cast<double>(rb[i]);
            tmp[static_cast<size_t>(y) * wo + ox] = acc;
        }
    out.assign(static_cast<size_t>(ho) * wo, 0.0);
    for (int oy = 0; oy < ho; ++oy)
        for (int ox = 0; ox < wo; ++ox) {
            double acc = 0.0;
            for (int i = 0; i < 11; ++i) acc += win[i] * tmp[static_cast<size_t>(oy + i) * wo + ox];
            out[static_cast<size_t>(oy) * wo + ox] = acc;
        }
}

} // namespace detail

// Mean SSIM over 11x11 Gaussian windows (sigma 1.5), averaged over channels
// and batch items. Dynamic range is 1 (images live in [0,1]).
template <typename S>
double ssim(const Tensor4<S>& x, const Tensor4<S>& xhat) {
    if (!x.same_shape(xhat))
        throw ShapeError("ssim: shape mismatch " + x.shape_str() + " vs " + xhat.shape_str());
    if (x.h() < 11 || x.w() < 11)
        throw DegenerateInputError("ssim: image smaller than the 11x11 window: " + x.shape_str());
    static const std::array<double, 11> win = detail::ssim_window();
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    const size_t plane = static_cast<size_t>(x.h()) * x.w();
    std::vector<double> tmp, mu_x, mu_y, ex2, ey2, exy;
    double acc = 0.0;
    size_t count = 0;
    for (int n = 0; n < x.b(); ++n)
        for (int c = 0; c < x.c(); ++c) {
            const S* px = x.item(n) + c * plane;
            const S* py = xhat.item(n) + c * plane;
            detail::ssim_filter_plane(px, x.h(), x.w(), win, tmp, mu_x);
            detail::ssim_filter_plane(py, x.h(), x.w(), win, tmp, mu_y);
            detail::ssim_filter_plane(px, x.h(), x.w(), win, tmp, ex2, /*square=*/true);
            detail::ssim_filter_plane(py, x.h(), x.w(), win, tmp, ey2, /*square=*/true);
            detail::ssim_filter_product(px, py, x.h(), x.w(), win, tmp, exy);
            for (size_t i = 0; i < mu_x.size(); ++i) {
                const double mx = mu_x[i], my = mu_y[i];
                const double vx = ex2[i] - mx * mx;
                const double vy = ey2[i] - my * my;
                const double cov = exy[i] - mx * my;
                acc += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                       ((mx * mx + my * my + c1) * (vx + vy + c2));
                ++count;
            }
        }
    return acc / static_cast<double>(count);
}

// Mean of per-item PSNRs; items with exact reconstruction contribute the
// +inf sentinel, which propagates (documented behaviour for degenerate runs).
template <typename S>
double mean_psnr(const Tensor4<S>& x, const Tensor4<S>& xhat, double max_val = 1.0) {
    if (!x.same_shape(xhat))
        throw ShapeError("mean_psnr: shape mismatch");
    double acc = 0.0;
    for (int n = 0; n < x.b(); ++n) {
        double m = pairwise_accumulate(0, x.item_size(), [&](size_t i) {
            const double d = static_cast<double>(x.item(n)[i]) - xhat.item(n)[i];
            return d * d;
        }) / static_cast<double>(x.item_size());
        if (m == 0.0) return std::numeric_limits<double>::infinity();
        acc += 10.0 * std::log10(max_val * max_val / m);
    }
    return acc / x.b();
}

} // namespace sijscc
