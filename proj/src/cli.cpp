// SPDX-License-Identifier: Apache-2.0
#include "sijscc/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "sijscc/complexity.hpp"
#include "sijscc/image_io.hpp"
#include "sijscc/conditioning.hpp"
#include "sijscc/metrics_io.hpp"
#include "sijscc/run_config.hpp"
#include "sijscc/symbol_file.hpp"

namespace fs = std::filesystem;

namespace sijscc::cli {

namespace {

// Published complexity figures for this architecture family (T=16, RGB,
// MACs at 768x512), used to annotate `info` output.
struct PublishedPoint {
    int n;
    double params_m;
    double macs_g;
};
constexpr PublishedPoint kPublishedComplexity[] = {
    {64, 0.87, 48.10},   {96, 1.85, 104.26},  {128, 3.21, 182.05},
    {160, 4.96, 281.49}, {192, 7.09, 402.57}, {256, 12.49, 709.66},
};

int describe_and_fail(const std::exception& e, int code) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const CheckpointError& e) {
        return describe_and_fail(e, kExitCheckpoint);
    } catch (const ConfigError& e) {
        return describe_and_fail(e, kExitUsage);
    } catch (const IngestError& e) {
        return describe_and_fail(e, kExitUsage);
    } catch (const ShapeError& e) {
        return describe_and_fail(e, kExitUsage);
    } catch (const DegenerateInputError& e) {
        return describe_and_fail(e, kExitUsage);
    } catch (const ContractError& e) {
        return describe_and_fail(e, kExitUsage);
    } catch (const std::exception& e) {
        return describe_and_fail(e, 1);
    }
}

std::string resolve_out_dir(const std::string& override_dir, const std::string& config_dir) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("SIJSCC_OUT_DIR"); env && *env) return env;
    return config_dir.empty() ? "out" : config_dir;
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

double wall_seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_loss_log(const std::string& path, const std::vector<std::array<double, 3>>& rows) {
    std::ofstream out(path, std::ios::binary);
    out << "step,train_loss,val_loss\n";
    char buf[128];
    for (const auto& r : rows) {
        if (std::isnan(r[2]))
            std::snprintf(buf, sizeof(buf), "%ld,%.8f,\n", static_cast<long>(r[0]), r[1]);
        else
            std::snprintf(buf, sizeof(buf), "%ld,%.8f,%.8f\n", static_cast<long>(r[0]), r[1],
                          r[2]);
        out << buf;
    }
}

} // namespace

int cmd_train(const TrainArgs& args) {
    return guarded([&]() {
        const auto t0 = std::chrono::steady_clock::now();
        RunConfig rc = load_run_config(args.config_path);
        if (args.max_steps) rc.train.max_steps = *args.max_steps;
        if (args.seed) rc.train.seed = *args.seed;
        rc.train.validate();
        if (rc.paths.train_data.empty())
            throw ConfigError("config field 'paths.train_data' is required for train");
        if (!fs::exists(rc.paths.train_data))
            throw ConfigError("paths.train_data does not exist: " + rc.paths.train_data);
        const std::string out_dir = resolve_out_dir(args.out_dir_override, rc.paths.out_dir);
        ensure_dir(out_dir);

        PatchDataset train_data(rc.paths.train_data, rc.train.crop, rc.train.seed,
                                rc.model.input_channels);
        std::optional<PatchDataset> val_data;
        if (!rc.paths.val_data.empty() && rc.paths.val_data != rc.paths.train_data)
            val_data.emplace(rc.paths.val_data, rc.train.crop, rc.train.seed,
                             rc.model.input_channels);

        Codec<float> model(rc.model);
        model.init_weights(rc.train.seed);
        std::printf("training: %zu params, %zu train images, batch %d, crop %d\n",
                    model.param_count(), train_data.image_count(), rc.train.batch,
                    rc.train.crop);

        TrainOutcome outcome =
            train(model, train_data, val_data ? &*val_data : nullptr, rc.train, nullptr,
                  [](long step, double loss, double val) {
                      if (!std::isnan(val))
                          std::printf("step %ld train_loss %.6f val_loss %.6f\n", step, loss, val);
                  });

        save_checkpoint(out_dir + "/checkpoint_best.sjck", outcome.best);
        save_checkpoint(out_dir + "/checkpoint_last.sjck", outcome.last);
        write_loss_log(out_dir + "/loss_log.csv", outcome.loss_log);
        nlohmann::json meta{{"config", run_config_to_json(rc)},
                            {"steps_run", outcome.steps_run},
                            {"diverged", outcome.diverged},
                            {"best_val_loss", outcome.best.best_val_loss},
                            {"best_step", outcome.best.step},
                            {"weights_fingerprint", weights_fingerprint(outcome.best)},
                            {"wall_time_sec", wall_seconds_since(t0)}};
        std::ofstream(out_dir + "/train_meta.json") << meta.dump(2) << "\n";
        if (outcome.diverged) {
            std::fprintf(stderr, "training diverged at step %ld; last good checkpoint kept\n",
                         outcome.last.step);
            return kExitDiverged;
        }
        std::printf("done: best val loss %.6f at step %ld\n", outcome.best.best_val_loss,
                    outcome.best.step);
        return kExitOk;
    });
}

int cmd_eval(const EvalArgs& args) {
    return guarded([&]() {
        const auto t0 = std::chrono::steady_clock::now();
        if (args.snrs.empty()) throw ConfigError("eval: empty snr list");
        Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
        auto codec = codec_from_checkpoint(ckpt);
        auto images = load_eval_images(args.data_path, ckpt.model.input_channels);
        ensure_dir(args.out_dir);

        SweepOptions opt;
        opt.kind = channel_kind_from_name(args.channel);
        opt.rician_k = args.rician_k;
        opt.seed = args.seed;
        opt.conditioning_snr_override = args.mismatch_snr;
        const std::string dataset_id = fs::path(args.data_path).filename().string();
        auto records = snr_sweep(*codec, images, dataset_id, args.snrs, opt);

        write_metrics_csv(args.out_dir + "/metrics.csv", records);
        nlohmann::json meta{{"model", model_config_to_json(ckpt.model)},
                            {"checkpoint", args.checkpoint_path},
                            {"weights_fingerprint", weights_fingerprint(ckpt)},
                            {"channel", args.channel},
                            {"seed", args.seed},
                            {"snrs", args.snrs},
                            {"mismatch_snr", args.mismatch_snr ? nlohmann::json(*args.mismatch_snr)
                                                               : nlohmann::json()},
                            {"dataset", args.data_path},
                            {"wall_time_sec", wall_seconds_since(t0)}};
        write_metrics_json(args.out_dir + "/metrics.json", records, meta);

        PlotSeries series;
        const auto [rn, rd] = codec->config().ratio_fraction();
        series.label = "ratio " + std::to_string(rn) + "/" + std::to_string(rd);
        for (const auto& r : records) series.points.emplace_back(r.snr_db, r.psnr_db);
        write_line_plot_svg(args.out_dir + "/psnr_vs_snr.svg", "Reconstruction quality", "SNR (dB)",
                            "PSNR (dB)", {series});
        std::ofstream(args.out_dir + "/psnr_vs_snr.meta.json") << meta.dump(2) << "\n";
        for (const auto& r : records)
            std::printf("snr %6.2f dB  psnr %8.4f dB  ssim %.4f  (n=%d)\n", r.snr_db, r.psnr_db,
                        r.ssim, r.n_images);
        return kExitOk;
    });
}

int cmd_transmit(const TransmitArgs& args) {
    return guarded([&]() {
        Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
        auto codec = codec_from_checkpoint(ckpt);
        Tensor4<float> img = center_crop_mod4(load_image(args.image_path));
        if (img.c() != ckpt.model.input_channels)
            throw IngestError("image channel count does not match the model");

        ComplexSymbolVector z = codec->options().snr_adaptive_encoder
                                    ? codec->encode_with_snr(img, args.snr_db)
                                    : codec->encode(img);
        ChannelSpec spec;
        spec.kind = channel_kind_from_name(args.channel);
        spec.snr_db = args.snr_db;
        spec.rician_k = args.rician_k;
        spec.seed = args.seed;
        FadedSymbols rx = transmit(z, spec, /*nonce=*/0);
        ComplexSymbolVector zhat =
            spec.kind != ChannelKind::Awgn ? equalize(rx) : rx.symbols;

        if (!args.out_symbols.empty())
            write_symbol_file(args.out_symbols, zhat, static_cast<uint16_t>(ckpt.model.t),
                              static_cast<uint32_t>(img.h()), static_cast<uint32_t>(img.w()),
                              static_cast<float>(args.snr_db));
        Tensor4<float> rec = codec->decode(zhat, img.h(), img.w(), args.snr_db);
        if (!args.out_image.empty()) save_image(args.out_image, rec);

        const size_t n = static_cast<size_t>(img.h()) * img.w() * img.c();
        const auto [rn, rd] = codec->config().ratio_fraction();
        std::printf("k=%zu n=%zu ratio=%ld/%ld snr_db=%g psnr_db=%.4f\n", z.k(), n, rn, rd,
                    args.snr_db, psnr(img, rec, 1.0));
        return kExitOk;
    });
}

int cmd_receive(const ReceiveArgs& args) {
    return guarded([&]() {
        Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
        auto codec = codec_from_checkpoint(ckpt);
        SymbolFile f = read_symbol_file(args.symbols_path);
        if (f.t != ckpt.model.t)
            throw CheckpointError("symbol file was produced with t=" + std::to_string(f.t) +
                                  " but the checkpoint has t=" + std::to_string(ckpt.model.t));
        const double snr = std::isnan(f.snr_db) ? 0.0 : f.snr_db;
        Tensor4<float> rec = codec->decode(f.symbols, static_cast<int>(f.h),
                                           static_cast<int>(f.w), snr);
        save_image(args.out_image, rec);
        std::printf("decoded %llux%llu image from %llu symbols\n",
                    static_cast<unsigned long long>(f.w), static_cast<unsigned long long>(f.h),
                    static_cast<unsigned long long>(f.k));
        return kExitOk;
    });
}

int cmd_info(const InfoArgs& args) {
    return guarded([&]() {
        ModelConfig cfg;
        BuildOptions build;
        if (!args.checkpoint_path.empty()) {
            Checkpoint ckpt = load_checkpoint(args.checkpoint_path);
            cfg = ckpt.model;
            build = ckpt.build;
        } else if (!args.config_path.empty()) {
            cfg = load_run_config(args.config_path).model;
        } else {
            throw ConfigError("info: provide --checkpoint or --config");
        }
        ComplexityReport rep = count_complexity(cfg, args.height, args.width,
                                                build.snr_adaptive_encoder,
                                                build.snr_adaptive_decoder);
        std::printf("model: n=%d t=%d heads=%d input %dx%dx%d\n", cfg.n, cfg.t, cfg.heads,
                    args.width, args.height, cfg.input_channels);
        std::fputs(format_complexity_report(rep, args.per_layer).c_str(), stdout);
        // annotate against the published figures when the shape matches
        if (cfg.t == 16 && cfg.input_channels == 3) {
            for (const auto& ref : kPublishedComplexity) {
                if (ref.n != cfg.n) continue;
                const double p_dev = (rep.params / 1e6 - ref.params_m) / ref.params_m * 100.0;
                std::printf("reference (N=%d): params %.2fM (deviation %+.1f%%)\n", ref.n,
                            ref.params_m, p_dev);
                if (args.height == 768 && args.width == 512) {
                    const double m_dev = (rep.macs / 1e9 - ref.macs_g) / ref.macs_g * 100.0;
                    std::printf("reference (N=%d): MACs %.2fG at 768x512 (deviation %+.1f%%)\n",
                                ref.n, ref.macs_g, m_dev);
                }
            }
        }
        return kExitOk;
    });
}

int cmd_ablate(const AblateArgs& args) {
    return guarded([&]() {
        const auto t0 = std::chrono::steady_clock::now();
        RunConfig rc = load_run_config(args.config_path);
        if (rc.paths.train_data.empty() || !fs::exists(rc.paths.train_data))
            throw ConfigError("config field 'paths.train_data' must name an existing directory");
        const std::string out_dir = resolve_out_dir(args.out_dir_override, rc.paths.out_dir);
        ensure_dir(out_dir);

        std::vector<ConditioningMode> modes;
        for (const auto& m : args.modes) modes.push_back(conditioning_mode_from_name(m));
        const std::string eval_root =
            rc.paths.eval_data.empty() ? rc.paths.train_data : rc.paths.eval_data;
        auto eval_images = load_eval_images(eval_root, rc.model.input_channels);

        AblationResult result = ablation_run(
            modes, rc.model, rc.train, rc.paths.train_data, rc.paths.val_data, eval_images,
            args.snrs, rc.channel.seed, args.mismatch_snr,
            [](long step, double loss, double val) {
                if (!std::isnan(val))
                    std::printf("  step %ld train_loss %.6f val_loss %.6f\n", step, loss, val);
            });

        // CSV: mode,snr_db,psnr_db,ssim
        {
            std::ofstream out(out_dir + "/ablation.csv", std::ios::binary);
            out << "mode,snr_db,psnr_db,ssim\n";
            char buf[160];
            for (const auto& arm : result.arms)
                for (const auto& r : arm.records) {
                    std::snprintf(buf, sizeof(buf), "%s,%g,%.6f,%.6f\n", arm.label.c_str(),
                                  r.snr_db, r.psnr_db, r.ssim);
                    out << buf;
                }
        }
        std::vector<PlotSeries> series;
        for (const auto& arm : result.arms) {
            PlotSeries s;
            s.label = arm.label;
            for (const auto& r : arm.records) s.points.emplace_back(r.snr_db, r.psnr_db);
            series.push_back(std::move(s));
        }
        write_line_plot_svg(out_dir + "/ablation.svg", "SNR conditioning comparison", "SNR (dB)",
                            "PSNR (dB)", series);
        nlohmann::json meta{{"config", run_config_to_json(rc)},
                            {"modes", args.modes},
                            {"snrs", args.snrs},
                            {"wall_time_sec", wall_seconds_since(t0)}};
        std::ofstream(out_dir + "/ablation.meta.json") << meta.dump(2) << "\n";
        for (const auto& arm : result.arms)
            for (const auto& r : arm.records)
                std::printf("%-24s snr %6.2f dB  psnr %8.4f dB  ssim %.4f\n", arm.label.c_str(),
                            r.snr_db, r.psnr_db, r.ssim);
        return kExitOk;
    });
}

int cmd_plot(const PlotArgs& args) {
    return guarded([&]() {
        auto records = read_metrics_csv(args.metrics_csv);
        if (records.empty()) throw IngestError("no rows in " + args.metrics_csv);
        // one curve per (dataset, ratio)
        std::vector<PlotSeries> series;
        for (const auto& r : records) {
            const std::string label = r.dataset_id + " ratio " + std::to_string(r.ratio_num) +
                                      "/" + std::to_string(r.ratio_den);
            auto it = std::find_if(series.begin(), series.end(),
                                   [&](const PlotSeries& s) { return s.label == label; });
            if (it == series.end()) {
                series.push_back({label, {}});
                it = series.end() - 1;
            }
            it->points.emplace_back(r.snr_db, r.psnr_db);
        }
        write_line_plot_svg(args.out_svg, args.title, "SNR (dB)", "PSNR (dB)", series);
        return kExitOk;
    });
}

} // namespace sijscc::cli
