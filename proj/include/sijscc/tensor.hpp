// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace sijscc {

// 64-byte-aligned allocator. All tensor and scratch storage uses it so SIMD
// kernels always see the same alignment class; without this, results can
// drift by one ulp between allocations, breaking bit-reproducibility
// contracts.
template <typename T>
struct AlignedAlloc {
    using value_type = T;
    static constexpr size_t kAlign = 64;

    AlignedAlloc() = default;
    template <typename U>
    AlignedAlloc(const AlignedAlloc<U>&) {}

    T* allocate(size_t n) {
        const size_t bytes = ((n * sizeof(T) + kAlign - 1) / kAlign) * kAlign;
        void* p = std::aligned_alloc(kAlign, bytes ? bytes : kAlign);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, size_t) { std::free(p); }

    template <typename U>
    bool operator==(const AlignedAlloc<U>&) const {
        return true;
    }
    template <typename U>
    bool operator!=(const AlignedAlloc<U>&) const {
        return false;
    }
};

template <typename S>
using AlignedVec = std::vector<S, AlignedAlloc<S>>;

// Dense rank-4 tensor in NCHW layout (w fastest). Used for images, feature
// maps and parameter blocks alike; parameter tensors fold unused dims to 1.
template <typename S>
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int b, int c, int h, int w)
        : b_(b), c_(c), h_(h), w_(w),
          v_(static_cast<size_t>(b) * c * h * w, S(0)) {
        if (b < 0 || c < 0 || h < 0 || w < 0)
            throw std::invalid_argument("Tensor4: negative dimension");
    }

    static Tensor4 zeros_like(const Tensor4& o) { return Tensor4(o.b_, o.c_, o.h_, o.w_); }

    int b() const { return b_; }
    int c() const { return c_; }
    int h() const { return h_; }
    int w() const { return w_; }
    size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }
    bool same_shape(const Tensor4& o) const {
        return b_ == o.b_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
    }
    std::string shape_str() const {
        return std::to_string(b_) + "x" + std::to_string(c_) + "x" +
               std::to_string(h_) + "x" + std::to_string(w_);
    }

    S* data() { return v_.data(); }
    const S* data() const { return v_.data(); }

    // Pointer to the start of item n (one c*h*w block).
    S* item(int n) { return v_.data() + static_cast<size_t>(n) * c_ * h_ * w_; }
    const S* item(int n) const { return v_.data() + static_cast<size_t>(n) * c_ * h_ * w_; }
    size_t item_size() const { return static_cast<size_t>(c_) * h_ * w_; }

    S& operator()(int n, int ci, int y, int x) {
        return v_[((static_cast<size_t>(n) * c_ + ci) * h_ + y) * w_ + x];
    }
    S operator()(int n, int ci, int y, int x) const {
        return v_[((static_cast<size_t>(n) * c_ + ci) * h_ + y) * w_ + x];
    }
    S& flat(size_t i) { return v_[i]; }
    S flat(size_t i) const { return v_[i]; }

    void fill(S v) { std::fill(v_.begin(), v_.end(), v); }
    void zero() { fill(S(0)); }

    void add_(const Tensor4& o) {
        if (!same_shape(o)) throw std::invalid_argument("Tensor4::add_: shape mismatch");
        for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    }
    void scale_(S a) {
        for (auto& x : v_) x *= a;
    }

    template <typename T>
    Tensor4<T> cast() const {
        Tensor4<T> out(b_, c_, h_, w_);
        for (size_t i = 0; i < v_.size(); ++i) out.flat(i) = static_cast<T>(v_[i]);
        return out;
    }

    bool all_finite() const {
        for (const auto& x : v_)
            if (!std::isfinite(static_cast<double>(x))) return false;
        return true;
    }

private:
    int b_ = 0, c_ = 0, h_ = 0, w_ = 0;
    AlignedVec<S> v_;
};

// Pairwise (tree) summation in double. Exact for 2^k copies of the same
// value, and far more accurate than a running sum on long arrays.
template <typename S>
double pairwise_sum(const S* p, size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return static_cast<double>(p[0]);
    size_t half = n / 2;
    return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

template <typename F>
double pairwise_accumulate(size_t lo, size_t hi, const F& f) {
    if (hi == lo) return 0.0;
    if (hi - lo == 1) return f(lo);
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_accumulate(lo, mid, f) + pairwise_accumulate(mid, hi, f);
}

} // namespace sijscc
