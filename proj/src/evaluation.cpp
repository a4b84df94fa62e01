// SPDX-License-Identifier: Apache-2.0
#include "sijscc/evaluation.hpp"

#include "sijscc/dataset.hpp"

namespace sijscc {

std::vector<MetricsRecord> snr_sweep(Codec<float>& codec,
                                     const std::vector<std::pair<std::string, Tensor4<float>>>& images,
                                     const std::string& dataset_id,
                                     const std::vector<double>& snrs,
                                     const SweepOptions& opt) {
    if (images.empty()) throw IngestError("snr_sweep: empty dataset");
    std::vector<MetricsRecord> records;
    const auto [rnum, rden] = codec.config().ratio_fraction();
    for (size_t j = 0; j < snrs.size(); ++j) {
        const double snr = snrs[j];
        const double cond_snr = opt.conditioning_snr_override.value_or(snr);
        double psnr_acc = 0.0, ssim_acc = 0.0;
        for (size_t i = 0; i < images.size(); ++i) {
            Tensor4<float> img = center_crop_mod4(images[i].second);
            ComplexSymbolVector z = codec.options().snr_adaptive_encoder
                                        ? codec.encode_with_snr(img, cond_snr)
                                        : codec.encode(img);
            ChannelSpec spec;
            spec.kind = opt.kind;
            spec.snr_db = snr;
            spec.rician_k = opt.rician_k;
            spec.seed = opt.seed;
            const uint64_t nonce = i * 1000003ULL + j;
            FadedSymbols rx = transmit(z, spec, nonce);
            ComplexSymbolVector zhat = (opt.kind != ChannelKind::Awgn && opt.equalize_fading)
                                           ? equalize(rx)
                                           : rx.symbols;
            Tensor4<float> rec = codec.decode(zhat, img.h(), img.w(), cond_snr);
            psnr_acc += psnr(img, rec, 1.0);
            ssim_acc += ssim(img, rec);
        }
        MetricsRecord rec;
        rec.dataset_id = dataset_id;
        rec.snr_db = snr;
        rec.ratio_num = rnum;
        rec.ratio_den = rden;
        rec.psnr_db = psnr_acc / static_cast<double>(images.size());
        rec.ssim = ssim_acc / static_cast<double>(images.size());
        rec.n_images = static_cast<int>(images.size());
        records.push_back(std::move(rec));
    }
    return records;
}

Tensor4<float> reconstruct_batch(Codec<float>& codec, const Tensor4<float>& batch,
                                 std::optional<double> snr_db, uint64_t seed, uint64_t nonce) {
    nn::RunContext<float> ctx;
    ctx.grad = false;
    std::vector<double> snrs(batch.b(), snr_db.value_or(300.0));
    ctx.snr_db = &snrs;
    Tensor4<float> feats = codec.encode_features(batch, ctx);
    PowerNorm<float> norm;
    Tensor4<float> sent = norm.forward(feats);
    if (snr_db) {
        for (int i = 0; i < sent.b(); ++i)
            add_awgn_to_reals(sent.item(i), sent.item_size(), snr_to_sigma2(*snr_db), seed,
                              nonce * 4096 + i);
    }
    Tensor4<float> rec = codec.decode_features(sent, ctx);
    for (size_t i = 0; i < rec.size(); ++i)
        rec.flat(i) = std::min(1.0f, std::max(0.0f, rec.flat(i)));
    return rec;
}

} // namespace sijscc
