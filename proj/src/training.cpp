// SPDX-License-Identifier: Apache-2.0
#include "sijscc/training.hpp"

#include <cmath>
#include <limits>

#include "sijscc/channel.hpp"

namespace sijscc {

namespace {

constexpr uint64_t kSnrStream = 0x736E72ULL;            // "snr"
constexpr uint64_t kTrainNoiseTag = 0x74726E6F69ULL;    // train-noise seed salt
constexpr uint64_t kValNonce = 0x76616C0000000000ULL;   // validation noise namespace
constexpr uint64_t kNoncePerStep = 1 << 20;             // max batch per step

} // namespace

double charbonnier_loss(const Tensor4<float>& x, const Tensor4<float>& xhat, double eps) {
    if (!x.same_shape(xhat))
        throw ShapeError("charbonnier_loss: shape mismatch " + x.shape_str() + " vs " +
                         xhat.shape_str());
    if (!(eps > 0)) throw ConfigError("charbonnier_loss: eps must be > 0");
    return pairwise_accumulate(0, x.size(), [&](size_t i) {
        const double d = static_cast<double>(x.flat(i)) - static_cast<double>(xhat.flat(i));
        return std::sqrt(d * d + eps);
    }) / static_cast<double>(x.size());
}

Tensor4<float> charbonnier_grad(const Tensor4<float>& x, const Tensor4<float>& xhat, double eps) {
    Tensor4<float> g = Tensor4<float>::zeros_like(x);
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(xhat.flat(i)) - static_cast<double>(x.flat(i));
        g.flat(i) = static_cast<float>(d / std::sqrt(d * d + eps) * inv_n);
    }
    return g;
}

void lion_init(LionState& state, const std::vector<nn::ParamRef<float>>& params) {
    state.momentum.clear();
    state.momentum.reserve(params.size());
    for (const auto& p : params) state.momentum.push_back(Tensor4<float>::zeros_like(*p.value));
    state.step = 0;
}

void lion_step(const std::vector<nn::ParamRef<float>>& params, LionState& state, double lr,
               const TrainConfig& cfg) {
    if (state.momentum.size() != params.size())
        throw ConfigError("lion_step: state does not match parameter list");
    const float b1 = static_cast<float>(cfg.lion_beta1);
    const float b2 = static_cast<float>(cfg.lion_beta2);
    const float wd = static_cast<float>(cfg.weight_decay);
    const float lrf = static_cast<float>(lr);
    // validate before touching any weight, so divergence never leaves a
    // half-applied update behind
    for (const auto& p : params)
        if (!p.grad->all_finite())
            throw DivergenceError("non-finite gradient in " + p.name, state.step);
    for (size_t pi = 0; pi < params.size(); ++pi) {
        Tensor4<float>& w = *params[pi].value;
        const Tensor4<float>& g = *params[pi].grad;
        Tensor4<float>& m = state.momentum[pi];
        for (size_t i = 0; i < w.size(); ++i) {
            const float gi = g.flat(i);
            const float blend = b1 * m.flat(i) + (1.0f - b1) * gi;
            const float update = blend > 0.0f ? 1.0f : (blend < 0.0f ? -1.0f : 0.0f);
            w.flat(i) -= lrf * (update + wd * w.flat(i));
            m.flat(i) = b2 * m.flat(i) + (1.0f - b2) * gi;
        }
    }
    ++state.step;
}

double sample_training_snr(const TrainConfig& cfg, Rng& rng) {
    if (cfg.snr_low == cfg.snr_high) {
        rng.next_u64(); // keep the draw count stable either way
        return cfg.snr_low;
    }
    return rng.next_range(cfg.snr_low, cfg.snr_high);
}

namespace {

struct Trainer {
    Codec<float>& model;
    PatchDataset& train_data;
    PatchDataset* val_data;
    const TrainConfig& cfg;
    std::vector<nn::ParamRef<float>> params;
    LionState opt;
    Rng snr_rng;
    uint64_t chan_seed;
    double lr;
    double best_val = std::numeric_limits<double>::infinity();
    int bad_evals = 0;

    Trainer(Codec<float>& m, PatchDataset& td, PatchDataset* vd, const TrainConfig& c)
        : model(m), train_data(td), val_data(vd), cfg(c), params(m.params()),
          snr_rng(c.seed, kSnrStream), chan_seed(mix64(c.seed ^ kTrainNoiseTag)), lr(c.lr) {
        lion_init(opt, params);
    }

    Checkpoint make_checkpoint(long step) {
        Checkpoint ckpt = snapshot_weights(model, cfg);
        ckpt.step = step;
        ckpt.lr = lr;
        ckpt.best_val_loss = best_val;
        ckpt.bad_evals = bad_evals;
        ckpt.data_cursor = train_data.cursor();
        ckpt.snr_cursor = snr_rng.cursor();
        for (size_t i = 0; i < params.size(); ++i)
            ckpt.momentum.emplace(params[i].name, opt.momentum[i]);
        return ckpt;
    }

    void restore(const Checkpoint& ckpt) {
        apply_weights(model, ckpt);
        for (size_t i = 0; i < params.size(); ++i) {
            auto it = ckpt.momentum.find(params[i].name);
            if (it != ckpt.momentum.end()) opt.momentum[i] = it->second;
        }
        opt.step = ckpt.step;
        lr = ckpt.lr;
        best_val = ckpt.best_val_loss;
        bad_evals = ckpt.bad_evals;
        train_data.set_cursor(ckpt.data_cursor);
        snr_rng.set_cursor(ckpt.snr_cursor);
    }

    // One optimization step; returns the training loss.
    double step_once(long step) {
        Tensor4<float> batch = train_data.next_batch(cfg.batch);
        std::vector<double> snrs(batch.b());
        for (auto& s : snrs) s = sample_training_snr(cfg, snr_rng);

        nn::RunContext<float> ctx;
        ctx.snr_db = &snrs;
        ctx.grad = true;
        zero_grads(params);

        Tensor4<float> feats = model.encode_features(batch, ctx);
        PowerNorm<float> norm;
        Tensor4<float> sent = norm.forward(feats);
        Tensor4<float> clean = sent;
        if (!cfg.noiseless) {
            for (int i = 0; i < sent.b(); ++i)
                add_awgn_to_reals(sent.item(i), sent.item_size(), snr_to_sigma2(snrs[i]),
                                  chan_seed, static_cast<uint64_t>(step) * kNoncePerStep + i);
        }
        Tensor4<float> recon = model.decode_features(sent, ctx);
        const double loss = charbonnier_loss(batch, recon, cfg.charbonnier_eps);
        if (!std::isfinite(loss)) return loss;

        Tensor4<float> g = charbonnier_grad(batch, recon, cfg.charbonnier_eps);
        Tensor4<float> g_latent = model.decoder().backward(g);
        Tensor4<float> g_feats = norm.backward(g_latent, clean);
        model.encoder().backward(g_feats);
        lion_step(params, opt, lr, cfg);
        return loss;
    }

    // Deterministic validation loss: fixed batch, fixed mid-range SNR, fixed
    // noise stream, so successive evaluations are comparable.
    double val_loss() {
        const PatchDataset& src = val_data ? *val_data : train_data;
        Tensor4<float> batch = src.fixed_batch(cfg.val_batch, 0);
        const double snr = 0.5 * (cfg.snr_low + cfg.snr_high);
        std::vector<double> snrs(batch.b(), snr);
        nn::RunContext<float> ctx;
        ctx.snr_db = &snrs;
        ctx.grad = false;
        Tensor4<float> feats = model.encode_features(batch, ctx);
        PowerNorm<float> norm;
        Tensor4<float> sent = norm.forward(feats);
        if (!cfg.noiseless) {
            for (int i = 0; i < sent.b(); ++i)
                add_awgn_to_reals(sent.item(i), sent.item_size(), snr_to_sigma2(snr), chan_seed,
                                  kValNonce + i);
        }
        Tensor4<float> recon = model.decode_features(sent, ctx);
        return charbonnier_loss(batch, recon, cfg.charbonnier_eps);
    }
};

} // namespace

TrainOutcome train(Codec<float>& model, PatchDataset& train_data, PatchDataset* val_data,
                   const TrainConfig& cfg, const Checkpoint* resume, const ProgressFn& progress) {
    cfg.validate();
    Trainer tr(model, train_data, val_data, cfg);
    long start_step = 0;
    if (resume) {
        tr.restore(*resume);
        start_step = resume->step;
    }

    TrainOutcome out;
    bool have_best = false;
    Checkpoint last_good = tr.make_checkpoint(start_step);
    out.best = last_good;

    for (long step = start_step; step < cfg.max_steps; ++step) {
        double loss;
        try {
            loss = tr.step_once(step);
        } catch (const DivergenceError&) {
            loss = std::numeric_limits<double>::quiet_NaN();
        }
        if (!std::isfinite(loss)) {
            out.diverged = true;
            out.last = last_good; // abort with the last good state
            if (!have_best) out.best = last_good;
            out.steps_run = step - start_step;
            return out;
        }
        out.steps_run = step - start_step + 1;
        double val = std::numeric_limits<double>::quiet_NaN();
        const bool eval_now =
            ((step + 1) % cfg.eval_interval == 0) || (step + 1 == cfg.max_steps);
        if (eval_now) {
            val = tr.val_loss();
            last_good = tr.make_checkpoint(step + 1);
            if (!have_best || val < tr.best_val) {
                tr.best_val = val;
                tr.bad_evals = 0;
                have_best = true;
                last_good.best_val_loss = tr.best_val;
                last_good.bad_evals = 0;
                out.best = last_good;
            } else if (++tr.bad_evals >= cfg.plateau_patience) {
                tr.lr *= cfg.lr_decay;
                tr.bad_evals = 0;
            }
        }
        out.loss_log.push_back({static_cast<double>(step + 1), loss, val});
        if (progress) progress(step + 1, loss, val);
    }
    out.last = tr.make_checkpoint(cfg.max_steps > start_step ? cfg.max_steps : start_step);
    if (!have_best) out.best = out.last;
    return out;
}

} // namespace sijscc
