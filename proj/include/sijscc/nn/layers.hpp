// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sijscc/errors.hpp"
#include "sijscc/nn/ops.hpp"
#include "sijscc/rng.hpp"

namespace sijscc::nn {

template <typename S>
struct ParamRef {
    std::string name;
    Tensor4<S>* value;
    Tensor4<S>* grad;
};

// Per-forward context. snr_db carries one value per batch item for layers
// that condition on channel state; layers that don't use it ignore it.
// grad=false disables activation caching for inference-only passes.
template <typename S>
struct RunContext {
    const std::vector<double>* snr_db = nullptr;
    bool grad = true;
};

// A differentiable block owning its parameters and parameter gradients.
// forward() must precede backward(); gradients accumulate until zeroed.
template <typename S>
class Block {
public:
    virtual ~Block() = default;
    virtual Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) = 0;
    virtual Tensor4<S> backward(const Tensor4<S>& grad_out) = 0;
    virtual void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) = 0;
    virtual void init(Rng& rng) = 0;
};

template <typename S>
void zero_grads(const std::vector<ParamRef<S>>& params) {
    for (const auto& p : params) p.grad->zero();
}

template <typename S>
size_t count_params(const std::vector<ParamRef<S>>& params) {
    size_t n = 0;
    for (const auto& p : params) n += p.value->size();
    return n;
}

// ---- stateless activation helpers with cached inputs -----------------------

template <typename S>
using ArrayMap = Eigen::Map<Eigen::Array<S, Eigen::Dynamic, 1>>;
template <typename S>
using CArrayMap = Eigen::Map<const Eigen::Array<S, Eigen::Dynamic, 1>>;

template <typename S>
struct GeluOp {
    Tensor4<S> x_cache;
    Tensor4<S> forward(const Tensor4<S>& x, bool grad) {
        if (grad) x_cache = x;
        Tensor4<S> y = x;
        ArrayMap<S> a(y.data(), y.size());
        a = S(0.5) * a * (S(1) + (a * S(M_SQRT1_2)).erf());
        return y;
    }
    Tensor4<S> backward(const Tensor4<S>& g) {
        Tensor4<S> gx = g;
        ArrayMap<S> ga(gx.data(), gx.size());
        CArrayMap<S> xa(x_cache.data(), x_cache.size());
        const S inv_sqrt2pi = static_cast<S>(1.0 / std::sqrt(2.0 * M_PI));
        ga *= S(0.5) * (S(1) + (xa * S(M_SQRT1_2)).erf()) +
              xa * (S(-0.5) * xa.square()).exp() * inv_sqrt2pi;
        return gx;
    }
};

template <typename S>
struct ReluOp {
    Tensor4<S> x_cache;
    Tensor4<S> forward(const Tensor4<S>& x, bool grad) {
        if (grad) x_cache = x;
        Tensor4<S> y = x;
        for (size_t i = 0; i < y.size(); ++i)
            if (y.flat(i) < S(0)) y.flat(i) = S(0);
        return y;
    }
    Tensor4<S> backward(const Tensor4<S>& g) {
        Tensor4<S> gx = g;
        for (size_t i = 0; i < gx.size(); ++i)
            if (x_cache.flat(i) <= S(0)) gx.flat(i) = S(0);
        return gx;
    }
};

template <typename S>
struct SigmoidOp {
    Tensor4<S> y_cache;
    Tensor4<S> forward(const Tensor4<S>& x, bool grad) {
        Tensor4<S> y = x;
        ArrayMap<S> a(y.data(), y.size());
        a = a.logistic();
        if (grad) y_cache = y;
        return y;
    }
    Tensor4<S> backward(const Tensor4<S>& g) {
        Tensor4<S> gx = g;
        ArrayMap<S> ga(gx.data(), gx.size());
        CArrayMap<S> ya(y_cache.data(), y_cache.size());
        ga *= ya * (S(1) - ya);
        return gx;
    }
};

// ---- Conv2d -----------------------------------------------------------------

template <typename S>
class Conv2d : public Block<S> {
public:
    Conv2d(int in_c, int out_c, int k, int stride = 1, int pad = 0)
        : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad),
          weight_(out_c, in_c, k, k), bias_(1, out_c, 1, 1),
          wgrad_(out_c, in_c, k, k), bgrad_(1, out_c, 1, 1) {}

    void init(Rng& rng) override {
        const double bound = std::sqrt(1.0 / (static_cast<double>(in_c_) * k_ * k_));
        for (size_t i = 0; i < weight_.size(); ++i)
            weight_.flat(i) = static_cast<S>(rng.next_range(-bound, bound));
        bias_.zero();
    }

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != in_c_)
            throw ConfigError("Conv2d: channel mismatch, got " + x.shape_str());
        if (ctx.grad) x_cache_ = x;
        in_h_ = x.h();
        in_w_ = x.w();
        const int ho = conv_out_dim(x.h(), k_, stride_, pad_);
        const int wo = conv_out_dim(x.w(), k_, stride_, pad_);
        if (ho < 1 || wo < 1)
            throw ShapeError("Conv2d: input " + x.shape_str() + " too small");
        Tensor4<S> out(x.b(), out_c_, ho, wo);
        const size_t col_rows = static_cast<size_t>(in_c_) * k_ * k_;
        const size_t cols = static_cast<size_t>(ho) * wo;
        CMapMat<S> wm(weight_.data(), out_c_, col_rows);
#pragma omp parallel for schedule(static) if (x.b() > 1)
        for (int n = 0; n < x.b(); ++n) {
            AlignedVec<S> col(col_rows * cols);
            im2col(x.item(n), in_c_, x.h(), x.w(), k_, stride_, pad_, col.data());
            CMapMat<S> cm(col.data(), col_rows, cols);
            MapMat<S> om(out.item(n), out_c_, cols);
            om.noalias() = wm * cm;
            for (int oc = 0; oc < out_c_; ++oc) om.row(oc).array() += bias_.flat(oc);
        }
        return out;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        const Tensor4<S>& x = x_cache_;
        const int ho = g.h(), wo = g.w();
        const size_t col_rows = static_cast<size_t>(in_c_) * k_ * k_;
        const size_t cols = static_cast<size_t>(ho) * wo;
        Tensor4<S> gx(x.b(), in_c_, in_h_, in_w_);
        std::vector<MatRM<S>> dw(x.b());
        std::vector<Eigen::Matrix<S, Eigen::Dynamic, 1>> db(x.b());
        CMapMat<S> wm(weight_.data(), out_c_, col_rows);
#pragma omp parallel for schedule(static) if (x.b() > 1)
        for (int n = 0; n < x.b(); ++n) {
            AlignedVec<S> col(col_rows * cols);
            im2col(x.item(n), in_c_, in_h_, in_w_, k_, stride_, pad_, col.data());
            CMapMat<S> cm(col.data(), col_rows, cols);
            CMapMat<S> gm(g.item(n), out_c_, cols);
            dw[n].noalias() = gm * cm.transpose();
            db[n] = gm.rowwise().sum();
            MatRM<S> colgrad = wm.transpose() * gm;
            col2im_add(colgrad.data(), in_c_, in_h_, in_w_, k_, stride_, pad_, gx.item(n));
        }
        MapMat<S> wgm(wgrad_.data(), out_c_, col_rows);
        for (int n = 0; n < x.b(); ++n) {
            wgm += dw[n];
            for (int oc = 0; oc < out_c_; ++oc) bgrad_.flat(oc) += db[n](oc);
        }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        out.push_back({prefix + ".weight", &weight_, &wgrad_});
        out.push_back({prefix + ".bias", &bias_, &bgrad_});
    }

    Tensor4<S>& weight() { return weight_; }
    Tensor4<S>& bias() { return bias_; }
    int out_channels() const { return out_c_; }

private:
    int in_c_, out_c_, k_, stride_, pad_;
    int in_h_ = 0, in_w_ = 0;
    Tensor4<S> weight_, bias_, wgrad_, bgrad_;
    Tensor4<S> x_cache_;
};

// ---- ConvTranspose2d --------------------------------------------------------

template <typename S>
class ConvTranspose2d : public Block<S> {
public:
    ConvTranspose2d(int in_c, int out_c, int k, int stride, int pad, int out_pad)
        : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad), out_pad_(out_pad),
          weight_(in_c, out_c, k, k), bias_(1, out_c, 1, 1),
          wgrad_(in_c, out_c, k, k), bgrad_(1, out_c, 1, 1) {}

    void init(Rng& rng) override {
        const double bound = std::sqrt(1.0 / (static_cast<double>(in_c_) * k_ * k_));
        for (size_t i = 0; i < weight_.size(); ++i)
            weight_.flat(i) = static_cast<S>(rng.next_range(-bound, bound));
        bias_.zero();
    }

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != in_c_)
            throw ConfigError("ConvTranspose2d: channel mismatch, got " + x.shape_str());
        if (ctx.grad) x_cache_ = x;
        in_h_ = x.h();
        in_w_ = x.w();
        const int ho = (x.h() - 1) * stride_ - 2 * pad_ + k_ + out_pad_;
        const int wo = (x.w() - 1) * stride_ - 2 * pad_ + k_ + out_pad_;
        Tensor4<S> out(x.b(), out_c_, ho, wo);
        const size_t col_rows = static_cast<size_t>(out_c_) * k_ * k_;
        const size_t cols = static_cast<size_t>(x.h()) * x.w();
        CMapMat<S> wm(weight_.data(), in_c_, col_rows);
#pragma omp parallel for schedule(static) if (x.b() > 1)
        for (int n = 0; n < x.b(); ++n) {
            CMapMat<S> xm(x.item(n), in_c_, cols);
            MatRM<S> col = wm.transpose() * xm;
            col2im_add(col.data(), out_c_, ho, wo, k_, stride_, pad_, out.item(n));
            MapMat<S> om(out.item(n), out_c_, static_cast<size_t>(ho) * wo);
            for (int oc = 0; oc < out_c_; ++oc) om.row(oc).array() += bias_.flat(oc);
        }
        return out;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        const Tensor4<S>& x = x_cache_;
        const size_t col_rows = static_cast<size_t>(out_c_) * k_ * k_;
        const size_t cols = static_cast<size_t>(in_h_) * in_w_;
        Tensor4<S> gx(x.b(), in_c_, in_h_, in_w_);
        std::vector<MatRM<S>> dw(x.b());
        std::vector<Eigen::Matrix<S, Eigen::Dynamic, 1>> db(x.b());
        CMapMat<S> wm(weight_.data(), in_c_, col_rows);
#pragma omp parallel for schedule(static) if (x.b() > 1)
        for (int n = 0; n < x.b(); ++n) {
            AlignedVec<S> icol(col_rows * cols);
            im2col(g.item(n), out_c_, g.h(), g.w(), k_, stride_, pad_, icol.data());
            CMapMat<S> gm(icol.data(), col_rows, cols);
            CMapMat<S> xm(x.item(n), in_c_, cols);
            MapMat<S> gxm(gx.item(n), in_c_, cols);
            gxm.noalias() = wm * gm;
            dw[n].noalias() = xm * gm.transpose();
            CMapMat<S> gfull(g.item(n), out_c_, static_cast<size_t>(g.h()) * g.w());
            db[n] = gfull.rowwise().sum();
        }
        MapMat<S> wgm(wgrad_.data(), in_c_, col_rows);
        for (int n = 0; n < x.b(); ++n) {
            wgm += dw[n];
            for (int oc = 0; oc < out_c_; ++oc) bgrad_.flat(oc) += db[n](oc);
        }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        out.push_back({prefix + ".weight", &weight_, &wgrad_});
        out.push_back({prefix + ".bias", &bias_, &bgrad_});
    }

private:
    int in_c_, out_c_, k_, stride_, pad_, out_pad_;
    int in_h_ = 0, in_w_ = 0;
    Tensor4<S> weight_, bias_, wgrad_, bgrad_;
    Tensor4<S> x_cache_;
};

// ---- Generalized divisive normalization -------------------------------------
// y_i = x_i * (beta_i + sum_j gamma_ij x_j^2)^(+-1/2), the sign picked by
// `inverse`. Parameters are stored unconstrained and squared on use, which
// keeps beta >= beta_min and gamma >= 0 without projection steps.

template <typename S>
class Gdn : public Block<S> {
public:
    explicit Gdn(int channels, bool inverse, double beta_min = 1e-6)
        : c_(channels), inverse_(inverse), beta_min_(beta_min),
          beta_raw_(1, channels, 1, 1), gamma_raw_(channels, channels, 1, 1),
          beta_grad_(1, channels, 1, 1), gamma_grad_(channels, channels, 1, 1) {}

    void init(Rng&) override {
        // beta = 1, gamma = 0.1 I plus a small off-diagonal so the squared
        // reparameterization does not pin cross terms at zero gradient.
        for (int i = 0; i < c_; ++i)
            beta_raw_.flat(i) = static_cast<S>(std::sqrt(1.0 - beta_min_));
        for (int i = 0; i < c_; ++i)
            for (int j = 0; j < c_; ++j)
                gamma_raw_.flat(static_cast<size_t>(i) * c_ + j) =
                    static_cast<S>(i == j ? std::sqrt(0.1) : std::sqrt(1e-4));
    }

    // effective (floored) parameters
    S beta(int i) const { return static_cast<S>(beta_min_) + beta_raw_.flat(i) * beta_raw_.flat(i); }
    S gamma(int i, int j) const {
        S g = gamma_raw_.flat(static_cast<size_t>(i) * c_ + j);
        return g * g;
    }
    void set_effective(const std::vector<S>& beta, const std::vector<S>& gamma) {
        for (int i = 0; i < c_; ++i)
            beta_raw_.flat(i) = static_cast<S>(std::sqrt(std::max(0.0, static_cast<double>(beta[i]) - beta_min_)));
        for (size_t i = 0; i < gamma.size(); ++i)
            gamma_raw_.flat(i) = static_cast<S>(std::sqrt(static_cast<double>(gamma[i])));
    }

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != c_)
            throw ConfigError("Gdn: channel mismatch, got " + x.shape_str());
        const size_t hw = static_cast<size_t>(x.h()) * x.w();
        MatRM<S> gamma_eff(c_, c_);
        for (int i = 0; i < c_; ++i)
            for (int j = 0; j < c_; ++j) gamma_eff(i, j) = gamma(i, j);
        Tensor4<S> y(x.b(), c_, x.h(), x.w());
        Tensor4<S> denom(x.b(), c_, x.h(), x.w());
#pragma omp parallel for schedule(static) if (x.b() > 1)
        for (int n = 0; n < x.b(); ++n) {
            CMapMat<S> xm(x.item(n), c_, hw);
            MatRM<S> p = xm.array().square();
            MapMat<S> sm(denom.item(n), c_, hw);
            sm.noalias() = gamma_eff * p;
            for (int i = 0; i < c_; ++i) sm.row(i).array() += beta(i);
            MapMat<S> ym(y.item(n), c_, hw);
            if (inverse_)
                ym = xm.array() * sm.array().sqrt();
            else
                ym = xm.array() * sm.array().rsqrt();
        }
        if (ctx.grad) {
            x_cache_ = x;
            denom_cache_ = std::move(denom);
        }
        return y;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        const Tensor4<S>& x = x_cache_;
        const size_t hw = static_cast<size_t>(x.h()) * x.w();
        MatRM<S> gamma_eff(c_, c_);
        for (int i = 0; i < c_; ++i)
            for (int j = 0; j < c_; ++j) gamma_eff(i, j) = gamma(i, j);
        Tensor4<S> gx(x.b(), c_, x.h(), x.w());
        std::vector<MatRM<S>> dgamma(x.b());
        std::vector<Eigen::Matrix<S, Eigen::Dynamic, 1>> dbeta(x.b());
#pragma omp parallel for schedule(static) if (x.b() > 1)
        for (int n = 0; n < x.b(); ++n) {
            CMapMat<S> xm(x.item(n), c_, hw);
            CMapMat<S> sm(denom_cache_.item(n), c_, hw);
            CMapMat<S> gm(g.item(n), c_, hw);
            MatRM<S> ds(c_, hw);
            MapMat<S> gxm(gx.item(n), c_, hw);
            if (inverse_) {
                MatRM<S> u = sm.array().sqrt();
                gxm = gm.array() * u.array();
                ds = S(0.5) * gm.array() * xm.array() / u.array();
            } else {
                MatRM<S> t = sm.array().rsqrt();
                gxm = gm.array() * t.array();
                ds = S(-0.5) * gm.array() * xm.array() * t.array() / sm.array();
            }
            dbeta[n] = ds.rowwise().sum();
            MatRM<S> p = xm.array().square();
            dgamma[n].noalias() = ds * p.transpose();
            MatRM<S> dp = gamma_eff.transpose() * ds;
            gxm.array() += S(2) * xm.array() * dp.array();
        }
        for (int n = 0; n < x.b(); ++n) {
            for (int i = 0; i < c_; ++i)
                beta_grad_.flat(i) += S(2) * beta_raw_.flat(i) * dbeta[n](i);
            for (int i = 0; i < c_; ++i)
                for (int j = 0; j < c_; ++j)
                    gamma_grad_.flat(static_cast<size_t>(i) * c_ + j) +=
                        S(2) * gamma_raw_.flat(static_cast<size_t>(i) * c_ + j) * dgamma[n](i, j);
        }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        out.push_back({prefix + ".beta_raw", &beta_raw_, &beta_grad_});
        out.push_back({prefix + ".gamma_raw", &gamma_raw_, &gamma_grad_});
    }

private:
    int c_;
    bool inverse_;
    double beta_min_;
    Tensor4<S> beta_raw_, gamma_raw_, beta_grad_, gamma_grad_;
    Tensor4<S> x_cache_, denom_cache_;
};

// ---- Sequential -------------------------------------------------------------

template <typename S>
class Sequential : public Block<S> {
public:
    Sequential() = default;

    Block<S>* add(std::string name, std::unique_ptr<Block<S>> b) {
        names_.push_back(std::move(name));
        blocks_.push_back(std::move(b));
        return blocks_.back().get();
    }
    void insert(size_t pos, std::string name, std::unique_ptr<Block<S>> b) {
        names_.insert(names_.begin() + pos, std::move(name));
        blocks_.insert(blocks_.begin() + pos, std::move(b));
    }
    size_t size() const { return blocks_.size(); }
    Block<S>* at(size_t i) { return blocks_[i].get(); }
    const std::string& name_at(size_t i) const { return names_[i]; }

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        Tensor4<S> cur = x;
        for (auto& b : blocks_) cur = b->forward(cur, ctx);
        return cur;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        Tensor4<S> cur = g;
        for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) cur = (*it)->backward(cur);
        return cur;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        for (size_t i = 0; i < blocks_.size(); ++i)
            blocks_[i]->collect_params(prefix + "." + names_[i], out);
    }

    void init(Rng& rng) override {
        for (auto& b : blocks_) b->init(rng);
    }

private:
    std::vector<std::string> names_;
    std::vector<std::unique_ptr<Block<S>>> blocks_;
};

} // namespace sijscc::nn
