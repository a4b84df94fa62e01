// SPDX-License-Identifier: Apache-2.0
#include "sijscc/run_config.hpp"

#include <fstream>

namespace sijscc {

using nlohmann::json;

namespace {

// Reads j[key] into out with a field-qualified error on type mismatch.
template <typename T>
void read_field(const json& j, const std::string& section, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + section + "." + key + "': " + e.what());
    }
}

} // namespace

json model_config_to_json(const ModelConfig& m) {
    return json{{"n", m.n},
                {"t", m.t},
                {"heads", m.heads},
                {"acmix_kernel", m.acmix_kernel},
                {"input_channels", m.input_channels},
                {"encoder_expansions", m.encoder_expansions},
                {"stage1_blocks", m.stage1_blocks}};
}

ModelConfig model_config_from_json(const json& j) {
    ModelConfig m;
    read_field(j, "model", "n", m.n);
    read_field(j, "model", "t", m.t);
    read_field(j, "model", "heads", m.heads);
    read_field(j, "model", "acmix_kernel", m.acmix_kernel);
    read_field(j, "model", "input_channels", m.input_channels);
    read_field(j, "model", "encoder_expansions", m.encoder_expansions);
    read_field(j, "model", "stage1_blocks", m.stage1_blocks);
    m.validate();
    return m;
}

json train_config_to_json(const TrainConfig& t) {
    return json{{"crop", t.crop},
                {"batch", t.batch},
                {"lr", t.lr},
                {"lr_decay", t.lr_decay},
                {"plateau_patience", t.plateau_patience},
                {"snr_low", t.snr_low},
                {"snr_high", t.snr_high},
                {"noiseless", t.noiseless},
                {"charbonnier_eps", t.charbonnier_eps},
                {"lion_beta1", t.lion_beta1},
                {"lion_beta2", t.lion_beta2},
                {"weight_decay", t.weight_decay},
                {"max_steps", t.max_steps},
                {"eval_interval", t.eval_interval},
                {"val_batch", t.val_batch},
                {"seed", t.seed}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig t;
    read_field(j, "train", "crop", t.crop);
    read_field(j, "train", "batch", t.batch);
    read_field(j, "train", "lr", t.lr);
    read_field(j, "train", "lr_decay", t.lr_decay);
    read_field(j, "train", "plateau_patience", t.plateau_patience);
    read_field(j, "train", "snr_low", t.snr_low);
    read_field(j, "train", "snr_high", t.snr_high);
    read_field(j, "train", "noiseless", t.noiseless);
    read_field(j, "train", "charbonnier_eps", t.charbonnier_eps);
    read_field(j, "train", "lion_beta1", t.lion_beta1);
    read_field(j, "train", "lion_beta2", t.lion_beta2);
    read_field(j, "train", "weight_decay", t.weight_decay);
    read_field(j, "train", "max_steps", t.max_steps);
    read_field(j, "train", "eval_interval", t.eval_interval);
    read_field(j, "train", "val_batch", t.val_batch);
    read_field(j, "train", "seed", t.seed);
    t.validate();
    return t;
}

json channel_spec_to_json(const ChannelSpec& c) {
    return json{{"kind", channel_kind_name(c.kind)},
                {"snr_db", c.snr_db},
                {"rician_k", c.rician_k},
                {"seed", c.seed}};
}

ChannelSpec channel_spec_from_json(const json& j) {
    ChannelSpec c;
    std::string kind = channel_kind_name(c.kind);
    read_field(j, "channel", "kind", kind);
    c.kind = channel_kind_from_name(kind);
    read_field(j, "channel", "snr_db", c.snr_db);
    read_field(j, "channel", "rician_k", c.rician_k);
    read_field(j, "channel", "seed", c.seed);
    c.validate();
    return c;
}

json build_options_to_json(const BuildOptions& b) {
    return json{{"snr_adaptive_encoder", b.snr_adaptive_encoder},
                {"snr_adaptive_decoder", b.snr_adaptive_decoder}};
}

BuildOptions build_options_from_json(const json& j) {
    BuildOptions b;
    read_field(j, "build", "snr_adaptive_encoder", b.snr_adaptive_encoder);
    read_field(j, "build", "snr_adaptive_decoder", b.snr_adaptive_decoder);
    return b;
}

json run_config_to_json(const RunConfig& rc) {
    return json{{"model", model_config_to_json(rc.model)},
                {"train", train_config_to_json(rc.train)},
                {"channel", channel_spec_to_json(rc.channel)},
                {"paths",
                 {{"train_data", rc.paths.train_data},
                  {"val_data", rc.paths.val_data},
                  {"eval_data", rc.paths.eval_data},
                  {"out_dir", rc.paths.out_dir}}}};
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, /*allow comments*/ true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse failure in " + path + ": " + e.what());
    }
    RunConfig rc;
    if (j.contains("model")) rc.model = model_config_from_json(j["model"]);
    if (j.contains("train")) rc.train = train_config_from_json(j["train"]);
    if (j.contains("channel")) rc.channel = channel_spec_from_json(j["channel"]);
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        read_field(p, "paths", "train_data", rc.paths.train_data);
        read_field(p, "paths", "val_data", rc.paths.val_data);
        read_field(p, "paths", "eval_data", rc.paths.eval_data);
        read_field(p, "paths", "out_dir", rc.paths.out_dir);
    }
    return rc;
}

} // namespace sijscc
