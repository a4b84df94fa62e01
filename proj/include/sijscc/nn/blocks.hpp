// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sijscc/errors.hpp"
#include "sijscc/nn/layers.hpp"

namespace sijscc::nn {

// ---- Enhanced spatial attention ---------------------------------------------
// Lightweight mask branch: 1x1 reduction to 16 channels, strided conv plus
// max-pooling to grow the receptive field, one conv at the pooled resolution,
// bilinear restoration, 1x1 expansion, sigmoid. The mask multiplies the input.

template <typename S>
class Esa : public Block<S> {
public:
    static constexpr int kReducedChannels = 16;
    static constexpr int kMinSpatial = 8;

    explicit Esa(int channels)
        : c_(channels),
          reduce_(channels, kReducedChannels, 1),
          down_(kReducedChannels, kReducedChannels, 3, 2, 1),
          body_(kReducedChannels, kReducedChannels, 3, 1, 1),
          restore_(kReducedChannels, channels, 1) {}

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != c_)
            throw ConfigError("Esa: expected " + std::to_string(c_) + " channels, got " + x.shape_str());
        if (x.h() < kMinSpatial || x.w() < kMinSpatial)
            throw DegenerateInputError("Esa: spatial dims below " + std::to_string(kMinSpatial) +
                                       "x" + std::to_string(kMinSpatial) + ": " + x.shape_str());
        Tensor4<S> r = reduce_.forward(x, ctx);
        Tensor4<S> d = gelu_down_.forward(down_.forward(r, ctx), ctx.grad);
        pooled_h_ = d.h();
        pooled_w_ = d.w();
        Tensor4<S> p;
        maxpool_forward(d, 7, 3, 3, p, argmax_);
        Tensor4<S> bdy = gelu_body_.forward(body_.forward(p, ctx), ctx.grad);
        body_h_ = bdy.h();
        body_w_ = bdy.w();
        Tensor4<S> up = bilinear_resize(bdy, x.h(), x.w());
        Tensor4<S> mask = sig_.forward(restore_.forward(up, ctx), ctx.grad);
        Tensor4<S> out = mask;
        for (size_t i = 0; i < out.size(); ++i) out.flat(i) *= x.flat(i);
        if (ctx.grad) {
            x_cache_ = x;
            mask_cache_ = std::move(mask);
        }
        return out;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        Tensor4<S> dmask = g;
        for (size_t i = 0; i < dmask.size(); ++i) dmask.flat(i) *= x_cache_.flat(i);
        Tensor4<S> dx = g;
        for (size_t i = 0; i < dx.size(); ++i) dx.flat(i) *= mask_cache_.flat(i);

        Tensor4<S> cur = restore_.backward(sig_.backward(dmask));
        cur = bilinear_resize_backward(cur, body_h_, body_w_);
        cur = body_.backward(gelu_body_.backward(cur));
        cur = maxpool_backward(cur, argmax_, pooled_h_, pooled_w_);
        cur = reduce_.backward(down_.backward(gelu_down_.backward(cur)));
        dx.add_(cur);
        return dx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        reduce_.collect_params(prefix + ".reduce", out);
        down_.collect_params(prefix + ".down", out);
        body_.collect_params(prefix + ".body", out);
        restore_.collect_params(prefix + ".restore", out);
    }

    void init(Rng& rng) override {
        reduce_.init(rng);
        down_.init(rng);
        body_.init(rng);
        restore_.init(rng);
    }

    Conv2d<S>& reduce() { return reduce_; }
    Conv2d<S>& down() { return down_; }
    Conv2d<S>& body() { return body_; }
    Conv2d<S>& restore() { return restore_; }

private:
    int c_;
    Conv2d<S> reduce_, down_, body_, restore_;
    GeluOp<S> gelu_down_, gelu_body_;
    SigmoidOp<S> sig_;
    std::vector<int32_t> argmax_;
    int pooled_h_ = 0, pooled_w_ = 0, body_h_ = 0, body_w_ = 0;
    Tensor4<S> x_cache_, mask_cache_;
};

// ---- Inverted residual attention bottleneck ----------------------------------
// dense 3x3 -> 1x1 expansion by X -> 1x1 restoration -> 1x1 mix -> ESA, added
// to a skip path. The skip is the identity, or a 1x1 projection when the
// output width differs from the input width.

template <typename S>
class Irab : public Block<S> {
public:
    Irab(int in_c, int out_c, int expansion)
        : in_c_(in_c), out_c_(out_c), x_(expansion),
          dense_(in_c, in_c, 3, 1, 1),
          expand_(in_c, expansion * in_c, 1),
          restore_(expansion * in_c, out_c, 1),
          mix_(out_c, out_c, 1),
          esa_(out_c) {
        if (expansion < 1) throw ConfigError("Irab: expansion must be >= 1");
        if (in_c != out_c) proj_ = std::make_unique<Conv2d<S>>(in_c, out_c, 1);
    }

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != in_c_)
            throw ConfigError("Irab: expected " + std::to_string(in_c_) + " channels, got " + x.shape_str());
        Tensor4<S> t = gelu_dense_.forward(dense_.forward(x, ctx), ctx.grad);
        t = gelu_expand_.forward(expand_.forward(t, ctx), ctx.grad);
        t = mix_.forward(restore_.forward(t, ctx), ctx);
        t = esa_.forward(t, ctx);
        Tensor4<S> res = proj_ ? proj_->forward(x, ctx) : x;
        t.add_(res);
        return t;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        Tensor4<S> cur = esa_.backward(g);
        cur = gelu_expand_.backward(restore_.backward(mix_.backward(cur)));
        cur = dense_.backward(gelu_dense_.backward(expand_.backward(cur)));
        if (proj_) {
            cur.add_(proj_->backward(g));
        } else {
            cur.add_(g);
        }
        return cur;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        dense_.collect_params(prefix + ".dense", out);
        expand_.collect_params(prefix + ".expand", out);
        restore_.collect_params(prefix + ".restore", out);
        mix_.collect_params(prefix + ".mix", out);
        esa_.collect_params(prefix + ".esa", out);
        if (proj_) proj_->collect_params(prefix + ".proj", out);
    }

    void init(Rng& rng) override {
        dense_.init(rng);
        expand_.init(rng);
        restore_.init(rng);
        mix_.init(rng);
        esa_.init(rng);
        if (proj_) proj_->init(rng);
    }

    int expansion() const { return x_; }
    Conv2d<S>& dense() { return dense_; }
    Conv2d<S>& expand() { return expand_; }
    Conv2d<S>& restore() { return restore_; }
    Conv2d<S>& mix() { return mix_; }
    Esa<S>& esa() { return esa_; }
    Conv2d<S>* proj() { return proj_.get(); }

private:
    int in_c_, out_c_, x_;
    Conv2d<S> dense_, expand_, restore_, mix_;
    Esa<S> esa_;
    std::unique_ptr<Conv2d<S>> proj_;
    GeluOp<S> gelu_dense_, gelu_expand_;
};

// ---- Convolution / self-attention hybrid --------------------------------------
// Shared 1x1 projections feed two paths: multi-head global self-attention over
// all spatial positions, and a convolution path (1x1 mixing into kernel*kernel
// groups, then fixed one-hot shifts aggregated per channel). Path outputs are
// summed with learnable scalars. Attention is streamed over query blocks so
// activation memory stays linear in the number of positions.

template <typename S>
class Acmix : public Block<S> {
public:
    Acmix(int channels, int heads, int kernel)
        : c_(channels), heads_(heads), kernel_(kernel),
          q_proj_(channels, channels, 1), k_proj_(channels, channels, 1),
          v_proj_(channels, channels, 1), out_proj_(channels, channels, 1),
          conv_fc_(3 * channels, kernel * kernel * channels, 1),
          alpha_(1, 1, 1, 1), beta_(1, 1, 1, 1),
          alpha_grad_(1, 1, 1, 1), beta_grad_(1, 1, 1, 1) {
        if (heads < 1 || channels % heads != 0)
            throw ConfigError("Acmix: channels must be divisible by heads");
        if (kernel < 1 || kernel % 2 == 0)
            throw ConfigError("Acmix: kernel must be odd and positive");
    }

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != c_)
            throw ConfigError("Acmix: expected " + std::to_string(c_) + " channels, got " + x.shape_str());
        Tensor4<S> q = q_proj_.forward(x, ctx);
        Tensor4<S> k = k_proj_.forward(x, ctx);
        Tensor4<S> v = v_proj_.forward(x, ctx);

        Tensor4<S> att(x.b(), c_, x.h(), x.w());
        attention_forward(q, k, v, att);
        Tensor4<S> f_att = out_proj_.forward(att, ctx);

        Tensor4<S> cat = concat3(q, k, v);
        Tensor4<S> fmaps = conv_fc_.forward(cat, ctx);
        Tensor4<S> f_conv = shift_aggregate(fmaps);

        Tensor4<S> out(x.b(), c_, x.h(), x.w());
        const S a = alpha_.flat(0), b = beta_.flat(0);
        for (size_t i = 0; i < out.size(); ++i)
            out.flat(i) = a * f_att.flat(i) + b * f_conv.flat(i);
        if (ctx.grad) {
            q_cache_ = std::move(q);
            k_cache_ = std::move(k);
            v_cache_ = std::move(v);
            f_att_cache_ = std::move(f_att);
            f_conv_cache_ = std::move(f_conv);
        }
        return out;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        const S a = alpha_.flat(0), b = beta_.flat(0);
        double da = 0.0, db = 0.0;
        Tensor4<S> df_att = g, df_conv = g;
        for (size_t i = 0; i < g.size(); ++i) {
            da += static_cast<double>(g.flat(i)) * f_att_cache_.flat(i);
            db += static_cast<double>(g.flat(i)) * f_conv_cache_.flat(i);
            df_att.flat(i) = a * g.flat(i);
            df_conv.flat(i) = b * g.flat(i);
        }
        alpha_grad_.flat(0) += static_cast<S>(da);
        beta_grad_.flat(0) += static_cast<S>(db);

        // convolution path
        Tensor4<S> dfmaps = shift_aggregate_backward(df_conv);
        Tensor4<S> dcat = conv_fc_.backward(dfmaps);
        Tensor4<S> dq(g.b(), c_, g.h(), g.w());
        Tensor4<S> dk = Tensor4<S>::zeros_like(dq);
        Tensor4<S> dv = Tensor4<S>::zeros_like(dq);
        split3(dcat, dq, dk, dv);

        // attention path
        Tensor4<S> datt = out_proj_.backward(df_att);
        attention_backward(datt, dq, dk, dv);

        Tensor4<S> dx = q_proj_.backward(dq);
        dx.add_(k_proj_.backward(dk));
        dx.add_(v_proj_.backward(dv));
        return dx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        q_proj_.collect_params(prefix + ".query", out);
        k_proj_.collect_params(prefix + ".key", out);
        v_proj_.collect_params(prefix + ".value", out);
        out_proj_.collect_params(prefix + ".out", out);
        conv_fc_.collect_params(prefix + ".conv_fc", out);
        out.push_back({prefix + ".alpha", &alpha_, &alpha_grad_});
        out.push_back({prefix + ".beta", &beta_, &beta_grad_});
    }

    void init(Rng& rng) override {
        q_proj_.init(rng);
        k_proj_.init(rng);
        v_proj_.init(rng);
        out_proj_.init(rng);
        conv_fc_.init(rng);
        alpha_.fill(S(1));
        beta_.fill(S(1));
    }

    Tensor4<S>& alpha() { return alpha_; }
    Tensor4<S>& beta() { return beta_; }
    int heads() const { return heads_; }

    // Row-stochastic attention weights for one (item, head), for inspection.
    MatRM<S> attention_rows(const Tensor4<S>& x, int item, int head) {
        RunContext<S> ctx;
        ctx.grad = true;
        forward(x, ctx);
        const int d = c_ / heads_;
        const size_t hw = static_cast<size_t>(x.h()) * x.w();
        CMapMat<S> qm(q_cache_.item(item), c_, hw);
        CMapMat<S> km(k_cache_.item(item), c_, hw);
        MatRM<S> scores = qm.middleRows(head * d, d).transpose() * km.middleRows(head * d, d);
        scores /= static_cast<S>(std::sqrt(static_cast<double>(d)));
        MatRM<S> att(hw, hw);
        for (Eigen::Index r = 0; r < scores.rows(); ++r)
            att.row(r) = softmax_row(scores.row(r));
        return att;
    }

private:
    static Eigen::Matrix<S, 1, Eigen::Dynamic> softmax_row(
        const Eigen::Matrix<S, 1, Eigen::Dynamic>& row) {
        S m = row.maxCoeff();
        Eigen::Matrix<S, 1, Eigen::Dynamic> e = (row.array() - m).exp();
        return e / e.sum();
    }

    Tensor4<S> concat3(const Tensor4<S>& a, const Tensor4<S>& b, const Tensor4<S>& c) const {
        Tensor4<S> out(a.b(), 3 * c_, a.h(), a.w());
        const size_t plane = static_cast<size_t>(c_) * a.h() * a.w();
        for (int n = 0; n < a.b(); ++n) {
            std::copy(a.item(n), a.item(n) + plane, out.item(n));
            std::copy(b.item(n), b.item(n) + plane, out.item(n) + plane);
            std::copy(c.item(n), c.item(n) + plane, out.item(n) + 2 * plane);
        }
        return out;
    }

    void split3(const Tensor4<S>& cat, Tensor4<S>& a, Tensor4<S>& b, Tensor4<S>& c) const {
        const size_t plane = static_cast<size_t>(c_) * cat.h() * cat.w();
        for (int n = 0; n < cat.b(); ++n) {
            std::copy(cat.item(n), cat.item(n) + plane, a.item(n));
            std::copy(cat.item(n) + plane, cat.item(n) + 2 * plane, b.item(n));
            std::copy(cat.item(n) + 2 * plane, cat.item(n) + 3 * plane, c.item(n));
        }
    }

    void attention_forward(const Tensor4<S>& q, const Tensor4<S>& k, const Tensor4<S>& v,
                           Tensor4<S>& out) const {
        const int d = c_ / heads_;
        const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(d)));
        const Eigen::Index hw = static_cast<Eigen::Index>(q.h()) * q.w();
        const Eigen::Index qblock = std::min<Eigen::Index>(hw, kQueryBlock);
        for (int n = 0; n < q.b(); ++n) {
            CMapMat<S> qm(q.item(n), c_, hw);
            CMapMat<S> km(k.item(n), c_, hw);
            CMapMat<S> vm(v.item(n), c_, hw);
            MapMat<S> om(out.item(n), c_, hw);
#pragma omp parallel for schedule(static) if (heads_ > 1 && hw >= 1024)
            for (int hd = 0; hd < heads_; ++hd) {
                auto qh = qm.middleRows(hd * d, d);
                auto kh = km.middleRows(hd * d, d);
                auto vh = vm.middleRows(hd * d, d);
                auto oh = om.middleRows(hd * d, d);
                for (Eigen::Index q0 = 0; q0 < hw; q0 += qblock) {
                    const Eigen::Index qn = std::min(qblock, hw - q0);
                    MatRM<S> scores = (qh.middleCols(q0, qn).transpose() * kh) * scale;
                    for (Eigen::Index r = 0; r < qn; ++r)
                        scores.row(r) = softmax_row(scores.row(r));
                    oh.middleCols(q0, qn).noalias() = vh * scores.transpose();
                }
            }
        }
    }

    // Recomputes the softmax per query block instead of storing the full
    // attention matrix.
    void attention_backward(const Tensor4<S>& dout, Tensor4<S>& dq, Tensor4<S>& dk,
                            Tensor4<S>& dv) const {
        const int d = c_ / heads_;
        const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(d)));
        const Eigen::Index hw = static_cast<Eigen::Index>(dout.h()) * dout.w();
        const Eigen::Index qblock = std::min<Eigen::Index>(hw, kQueryBlock);
        for (int n = 0; n < dout.b(); ++n) {
            CMapMat<S> qm(q_cache_.item(n), c_, hw);
            CMapMat<S> km(k_cache_.item(n), c_, hw);
            CMapMat<S> vm(v_cache_.item(n), c_, hw);
            CMapMat<S> dom(dout.item(n), c_, hw);
            MapMat<S> dqm(dq.item(n), c_, hw);
            MapMat<S> dkm(dk.item(n), c_, hw);
            MapMat<S> dvm(dv.item(n), c_, hw);
#pragma omp parallel for schedule(static) if (heads_ > 1 && hw >= 1024)
            for (int hd = 0; hd < heads_; ++hd) {
                auto qh = qm.middleRows(hd * d, d);
                auto kh = km.middleRows(hd * d, d);
                auto vh = vm.middleRows(hd * d, d);
                auto doh = dom.middleRows(hd * d, d);
                auto dqh = dqm.middleRows(hd * d, d);
                auto dkh = dkm.middleRows(hd * d, d);
                auto dvh = dvm.middleRows(hd * d, d);
                for (Eigen::Index q0 = 0; q0 < hw; q0 += qblock) {
                    const Eigen::Index qn = std::min(qblock, hw - q0);
                    MatRM<S> att = (qh.middleCols(q0, qn).transpose() * kh) * scale;
                    for (Eigen::Index r = 0; r < qn; ++r)
                        att.row(r) = softmax_row(att.row(r));
                    MatRM<S> datt = doh.middleCols(q0, qn).transpose() * vh;
                    dvh.noalias() += doh.middleCols(q0, qn) * att;
                    Eigen::Matrix<S, Eigen::Dynamic, 1> rowdot =
                        (datt.array() * att.array()).rowwise().sum();
                    MatRM<S> dscores =
                        (att.array() * (datt.array().colwise() - rowdot.array())) * scale;
                    dqh.middleCols(q0, qn).noalias() += kh * dscores.transpose();
                    dkh.noalias() += qh.middleCols(q0, qn) * dscores;
                }
            }
        }
    }

    Tensor4<S> shift_aggregate(const Tensor4<S>& fmaps) const {
        const int r = kernel_ / 2;
        const int h = fmaps.h(), w = fmaps.w();
        Tensor4<S> out(fmaps.b(), c_, h, w);
        for (int n = 0; n < fmaps.b(); ++n) {
            for (int g = 0; g < kernel_ * kernel_; ++g) {
                const int dy = g / kernel_ - r;
                const int dx = g % kernel_ - r;
                for (int ch = 0; ch < c_; ++ch) {
                    for (int y = 0; y < h; ++y) {
                        const int sy = y + dy;
                        if (sy < 0 || sy >= h) continue;
                        for (int x = 0; x < w; ++x) {
                            const int sx = x + dx;
                            if (sx < 0 || sx >= w) continue;
                            out(n, ch, y, x) += fmaps(n, g * c_ + ch, sy, sx);
                        }
                    }
                }
            }
        }
        return out;
    }

    Tensor4<S> shift_aggregate_backward(const Tensor4<S>& g) const {
        const int r = kernel_ / 2;
        const int h = g.h(), w = g.w();
        Tensor4<S> df(g.b(), kernel_ * kernel_ * c_, h, w);
        for (int n = 0; n < g.b(); ++n) {
            for (int gi = 0; gi < kernel_ * kernel_; ++gi) {
                const int dy = gi / kernel_ - r;
                const int dx = gi % kernel_ - r;
                for (int ch = 0; ch < c_; ++ch) {
                    for (int y = 0; y < h; ++y) {
                        const int sy = y + dy;
                        if (sy < 0 || sy >= h) continue;
                        for (int x = 0; x < w; ++x) {
                            const int sx = x + dx;
                            if (sx < 0 || sx >= w) continue;
                            df(n, gi * c_ + ch, sy, sx) += g(n, ch, y, x);
                        }
                    }
                }
            }
        }
        return df;
    }

    static constexpr Eigen::Index kQueryBlock = 1024;

    int c_, heads_, kernel_;
    Conv2d<S> q_proj_, k_proj_, v_proj_, out_proj_, conv_fc_;
    Tensor4<S> alpha_, beta_, alpha_grad_, beta_grad_;
    Tensor4<S> q_cache_, k_cache_, v_cache_, f_att_cache_, f_conv_cache_;
};

// ---- SNR-conditioned channel attention ----------------------------------------
// Global average pool, concatenate the per-item channel SNR (dB), two dense
// layers, sigmoid; the resulting per-channel scale multiplies the features.

template <typename S>
class AfModule : public Block<S> {
public:
    explicit AfModule(int channels, int reduction = 16)
        : c_(channels), hidden_(std::max(4, channels / reduction)),
          fc1_(channels + 1, std::max(4, channels / reduction), 1),
          fc2_(std::max(4, channels / reduction), channels, 1) {}

    Tensor4<S> forward(const Tensor4<S>& x, const RunContext<S>& ctx) override {
        if (x.c() != c_)
            throw ConfigError("AfModule: expected " + std::to_string(c_) + " channels, got " + x.shape_str());
        if (ctx.snr_db == nullptr || static_cast<int>(ctx.snr_db->size()) != x.b())
            throw ConfigError("AfModule: per-item snr_db missing from run context");
        const size_t hw = static_cast<size_t>(x.h()) * x.w();
        Tensor4<S> cat(x.b(), c_ + 1, 1, 1);
        for (int n = 0; n < x.b(); ++n) {
            for (int ch = 0; ch < c_; ++ch) {
                const S* plane = x.item(n) + static_cast<size_t>(ch) * hw;
                cat(n, ch, 0, 0) = static_cast<S>(pairwise_sum(plane, hw) / static_cast<double>(hw));
            }
            cat(n, c_, 0, 0) = static_cast<S>((*ctx.snr_db)[n]);
        }
        Tensor4<S> s = sig_.forward(
            fc2_.forward(relu_.forward(fc1_.forward(cat, ctx), ctx.grad), ctx), ctx.grad);
        Tensor4<S> out = x;
        for (int n = 0; n < x.b(); ++n)
            for (int ch = 0; ch < c_; ++ch) {
                S* plane = out.item(n) + static_cast<size_t>(ch) * hw;
                const S sc = s(n, ch, 0, 0);
                for (size_t i = 0; i < hw; ++i) plane[i] *= sc;
            }
        if (ctx.grad) {
            x_cache_ = x;
            scale_cache_ = std::move(s);
        }
        return out;
    }

    Tensor4<S> backward(const Tensor4<S>& g) override {
        const size_t hw = static_cast<size_t>(g.h()) * g.w();
        Tensor4<S> ds(g.b(), c_, 1, 1);
        Tensor4<S> dx = g;
        for (int n = 0; n < g.b(); ++n)
            for (int ch = 0; ch < c_; ++ch) {
                const S* gp = g.item(n) + static_cast<size_t>(ch) * hw;
                const S* xp = x_cache_.item(n) + static_cast<size_t>(ch) * hw;
                double acc = 0.0;
                for (size_t i = 0; i < hw; ++i) acc += static_cast<double>(gp[i]) * xp[i];
                ds(n, ch, 0, 0) = static_cast<S>(acc);
                S* dp = dx.item(n) + static_cast<size_t>(ch) * hw;
                const S sc = scale_cache_(n, ch, 0, 0);
                for (size_t i = 0; i < hw; ++i) dp[i] *= sc;
            }
        Tensor4<S> dcat = fc1_.backward(relu_.backward(fc2_.backward(sig_.backward(ds))));
        for (int n = 0; n < g.b(); ++n)
            for (int ch = 0; ch < c_; ++ch) {
                const S spread = dcat(n, ch, 0, 0) / static_cast<S>(hw);
                S* dp = dx.item(n) + static_cast<size_t>(ch) * hw;
                for (size_t i = 0; i < hw; ++i) dp[i] += spread;
            }
        return dx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamRef<S>>& out) override {
        fc1_.collect_params(prefix + ".fc1", out);
        fc2_.collect_params(prefix + ".fc2", out);
    }

    void init(Rng& rng) override {
        fc1_.init(rng);
        fc2_.init(rng);
    }

    Conv2d<S>& fc1() { return fc1_; }
    Conv2d<S>& fc2() { return fc2_; }

private:
    int c_, hidden_;
    Conv2d<S> fc1_, fc2_;
    ReluOp<S> relu_;
    SigmoidOp<S> sig_;
    Tensor4<S> x_cache_, scale_cache_;
};

} // namespace sijscc::nn
