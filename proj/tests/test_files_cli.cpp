// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "util.hpp"

#include "sijscc/cli.hpp"
#include "sijscc/evaluation.hpp"
#include "sijscc/metrics_io.hpp"
#include "sijscc/run_config.hpp"
#include "sijscc/symbol_file.hpp"
#include "sijscc/training.hpp"

using namespace sijscc;

namespace {

ModelConfig tiny_model() {
    ModelConfig cfg;
    cfg.n = 16;
    cfg.t = 16;
    cfg.heads = 4;
    cfg.encoder_expansions = {1, 1};
    cfg.stage1_blocks = 1;
    return cfg;
}

std::string write_tiny_config(const std::string& dir, long max_steps) {
    RunConfig rc;
    rc.model = tiny_model();
    rc.train.crop = 32;
    rc.train.batch = 2;
    rc.train.max_steps = max_steps;
    rc.train.eval_interval = 2;
    rc.train.val_batch = 2;
    rc.train.seed = 21;
    rc.paths.train_data = dir + "/data";
    rc.paths.out_dir = dir + "/out";
    const std::string path = dir + "/config.json";
    std::ofstream(path) << run_config_to_json(rc).dump(2);
    return path;
}

} // namespace

TEST_CASE("image io round trip within 8-bit quantization") {
    const std::string dir = sijscc::test::temp_dir("imgio");
    Tensor4<float> img = sijscc::test::synthetic_image(24, 36, 4);
    save_image(dir + "/a.ppm", img);
    Tensor4<float> back = load_image(dir + "/a.ppm");
    REQUIRE(back.same_shape(img));
    for (size_t i = 0; i < img.size(); ++i)
        CHECK(std::abs(back.flat(i) - img.flat(i)) <= 0.5f / 255.0f + 1e-6f);
    CHECK_THROWS_AS(load_image(dir + "/missing.ppm"), IngestError);
}

TEST_CASE("symbol file round trip is bit exact") {
    const std::string dir = sijscc::test::temp_dir("symfile");
    ComplexSymbolVector z;
    Rng rng(91, 0);
    for (int i = 0; i < 100; ++i)
        z.symbols.push_back({static_cast<float>(rng.next_range(-1, 1)),
                             static_cast<float>(rng.next_range(-1, 1))});
    const std::string path = dir + "/x.sjsc";
    write_symbol_file(path, z, 16, 32, 48, 7.5f);
    SymbolFile f = read_symbol_file(path);
    CHECK(f.k == 100u);
    CHECK(f.t == 16);
    CHECK(f.h == 32u);
    CHECK(f.w == 48u);
    CHECK(f.snr_db == 7.5f);
    for (size_t i = 0; i < z.k(); ++i) CHECK(f.symbols.symbols[i] == z.symbols[i]);

    std::ofstream(dir + "/garbage.sjsc") << "not a symbol file";
    CHECK_THROWS_AS(read_symbol_file(dir + "/garbage.sjsc"), IngestError);
}

TEST_CASE("checkpoint save/load round trip preserves every tensor bit") {
    const std::string dir = sijscc::test::temp_dir("ckpt");
    ModelConfig cfg = tiny_model();
    Codec<float> codec(cfg);
    codec.init_weights(33);
    TrainConfig tc;
    Checkpoint ck = snapshot_weights(codec, tc);
    ck.step = 17;
    ck.lr = 5e-5;
    ck.best_val_loss = 0.125;
    ck.data_cursor = 99;
    const std::string path = dir + "/m.sjck";
    save_checkpoint(path, ck);
    Checkpoint back = load_checkpoint(path);
    CHECK(back.step == 17);
    CHECK(back.lr == 5e-5);
    CHECK(back.best_val_loss == 0.125);
    CHECK(back.data_cursor == 99u);
    REQUIRE(back.weights.size() == ck.weights.size());
    for (const auto& [name, t] : ck.weights) {
        const auto& bt = back.weights.at(name);
        REQUIRE(bt.same_shape(t));
        for (size_t i = 0; i < t.size(); ++i) CHECK(bt.flat(i) == t.flat(i));
    }
    CHECK(weights_fingerprint(back) == weights_fingerprint(ck));

    // architecture mismatch is a checkpoint error
    ModelConfig other = cfg;
    other.n = 32;
    Codec<float> wrong(other);
    CHECK_THROWS_AS(apply_weights(wrong, back), CheckpointError);
}

TEST_CASE("metrics csv: golden format and parse round trip") {
    std::vector<MetricsRecord> recs(2);
    recs[0] = {"kodak", 1.0, 1, 6, 28.123456, 0.911234, 24};
    recs[1] = {"kodak", 19.0, 1, 6, std::numeric_limits<double>::infinity(), 1.0, 24};
    const std::string csv = metrics_csv_string(recs);
    CHECK(csv == "dataset_id,snr_db,ratio,psnr_db,ssim,n_images\n"
                 "kodak,1,1/6,28.123456,0.911234,24\n"
                 "kodak,19,1/6,inf,1.000000,24\n");
    const std::string dir = sijscc::test::temp_dir("csv");
    write_metrics_csv(dir + "/m.csv", recs);
    auto back = read_metrics_csv(dir + "/m.csv");
    REQUIRE(back.size() == 2u);
    CHECK(back[0].psnr_db == doctest::Approx(28.123456));
    CHECK(std::isinf(back[1].psnr_db));
    CHECK(back[1].ratio_num == 1);
    CHECK(back[1].ratio_den == 6);
}

TEST_CASE("svg plot contains the series and axis labels") {
    const std::string dir = sijscc::test::temp_dir("svg");
    PlotSeries s;
    s.label = "ratio 1/6";
    s.points = {{1, 25.0}, {7, 30.0}, {19, 33.5}};
    write_line_plot_svg(dir + "/p.svg", "Reconstruction quality", "SNR (dB)", "PSNR (dB)", {s});
    std::ifstream in(dir + "/p.svg");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("<svg") != std::string::npos);
    CHECK(all.find("ratio 1/6") != std::string::npos);
    CHECK(all.find("SNR (dB)") != std::string::npos);
    CHECK(all.find("PSNR (dB)") != std::string::npos);
}

TEST_CASE("cli: train happy path, then eval, transmit and receive round trip") {
    const std::string dir = sijscc::test::temp_dir("cli");
    sijscc::test::write_synthetic_folder(dir + "/data", 2, 32, 32, 800);
    const std::string config = write_tiny_config(dir, 2);

    cli::TrainArgs train_args;
    train_args.config_path = config;
    CHECK(cli::cmd_train(train_args) == cli::kExitOk);
    CHECK(std::filesystem::exists(dir + "/out/checkpoint_best.sjck"));
    CHECK(std::filesystem::exists(dir + "/out/checkpoint_last.sjck"));
    CHECK(std::filesystem::exists(dir + "/out/loss_log.csv"));

    cli::EvalArgs eval_args;
    eval_args.checkpoint_path = dir + "/out/checkpoint_best.sjck";
    eval_args.data_path = dir + "/data";
    eval_args.snrs = {1.0, 19.0};
    eval_args.out_dir = dir + "/out";
    CHECK(cli::cmd_eval(eval_args) == cli::kExitOk);
    CHECK(std::filesystem::exists(dir + "/out/metrics.csv"));
    CHECK(std::filesystem::exists(dir + "/out/psnr_vs_snr.svg"));

    // byte-identical CSV on repeat
    auto read_all = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    const std::string first = read_all(dir + "/out/metrics.csv");
    CHECK(cli::cmd_eval(eval_args) == cli::kExitOk);
    CHECK(read_all(dir + "/out/metrics.csv") == first);

    cli::TransmitArgs tx;
    tx.checkpoint_path = dir + "/out/checkpoint_best.sjck";
    tx.image_path = dir + "/data/img_000.ppm";
    tx.snr_db = 10.0;
    tx.out_symbols = dir + "/out/img.sjsc";
    tx.out_image = dir + "/out/rec_tx.ppm";
    CHECK(cli::cmd_transmit(tx) == cli::kExitOk);

    cli::ReceiveArgs rx;
    rx.checkpoint_path = dir + "/out/checkpoint_best.sjck";
    rx.symbols_path = dir + "/out/img.sjsc";
    rx.out_image = dir + "/out/rec_rx.ppm";
    CHECK(cli::cmd_receive(rx) == cli::kExitOk);
    CHECK(read_all(dir + "/out/rec_rx.ppm") == read_all(dir + "/out/rec_tx.ppm"));

    cli::PlotArgs plot;
    plot.metrics_csv = dir + "/out/metrics.csv";
    plot.out_svg = dir + "/out/replot.svg";
    CHECK(cli::cmd_plot(plot) == cli::kExitOk);
    CHECK(std::filesystem::exists(dir + "/out/replot.svg"));
}

TEST_CASE("cli: error exit codes") {
    const std::string dir = sijscc::test::temp_dir("cli_err");
    sijscc::test::write_synthetic_folder(dir + "/data", 1, 32, 32, 900);

    // missing train data path
    RunConfig rc;
    rc.model = tiny_model();
    rc.train.crop = 32;
    rc.paths.train_data = dir + "/nonexistent";
    rc.paths.out_dir = dir + "/out";
    std::ofstream(dir + "/bad.json") << run_config_to_json(rc).dump(2);
    cli::TrainArgs targs;
    targs.config_path = dir + "/bad.json";
    CHECK(cli::cmd_train(targs) == cli::kExitUsage);

    // unparseable config
    std::ofstream(dir + "/broken.json") << "{ not json";
    targs.config_path = dir + "/broken.json";
    CHECK(cli::cmd_train(targs) == cli::kExitUsage);

    // eval with empty snr list
    const std::string config = write_tiny_config(dir, 1);
    targs.config_path = config;
    REQUIRE(cli::cmd_train(targs) == cli::kExitOk);
    cli::EvalArgs eargs;
    eargs.checkpoint_path = dir + "/out/checkpoint_best.sjck";
    eargs.data_path = dir + "/data";
    eargs.snrs = {};
    CHECK(cli::cmd_eval(eargs) == cli::kExitUsage);

    // checkpoint mismatch: symbol file t differs from model t
    cli::ReceiveArgs rargs;
    rargs.checkpoint_path = dir + "/out/checkpoint_best.sjck";
    ComplexSymbolVector z;
    z.symbols.assign(8 * 8 * 8 / 32 * 32, {0.1f, 0.0f});
    write_symbol_file(dir + "/wrong.sjsc", z, /*t=*/8, 32, 32, 1.0f);
    rargs.symbols_path = dir + "/wrong.sjsc";
    rargs.out_image = dir + "/out/x.ppm";
    CHECK(cli::cmd_receive(rargs) == cli::kExitCheckpoint);

    // undecodable image
    cli::TransmitArgs tx;
    tx.checkpoint_path = dir + "/out/checkpoint_best.sjck";
    std::ofstream(dir + "/fake.ppm") << "hello";
    tx.image_path = dir + "/fake.ppm";
    CHECK(cli::cmd_transmit(tx) == cli::kExitUsage);
}

TEST_CASE("cli binary: subcommand wiring") {
#ifdef SIJSCC_CLI_PATH
    const std::string dir = sijscc::test::temp_dir("cli_bin");
    sijscc::test::write_synthetic_folder(dir + "/data", 1, 32, 32, 950);
    const std::string config = write_tiny_config(dir, 1);
    const std::string cmd = std::string(SIJSCC_CLI_PATH) + " train --config " + config +
                            " > " + dir + "/stdout.txt 2>&1";
    const int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    const int rc2 = std::system((std::string(SIJSCC_CLI_PATH) + " info --config " + config +
                                 " >> " + dir + "/stdout.txt 2>&1")
                                    .c_str());
    CHECK(WEXITSTATUS(rc2) == 0);
#endif
}
