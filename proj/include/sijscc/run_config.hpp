// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "sijscc/channel.hpp"
#include "sijscc/codec.hpp"
#include "sijscc/train_config.hpp"

namespace sijscc {

struct RunPaths {
    std::string train_data;
    std::string val_data;  // optional; falls back to train_data
    std::string eval_data; // optional
    std::string out_dir = "out";
};

// One config file drives every command; CLI flags override individual fields.
struct RunConfig {
    ModelConfig model;
    TrainConfig train;
    ChannelSpec channel;
    RunPaths paths;
};

nlohmann::json model_config_to_json(const ModelConfig& m);
ModelConfig model_config_from_json(const nlohmann::json& j);

nlohmann::json train_config_to_json(const TrainConfig& t);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json channel_spec_to_json(const ChannelSpec& c);
ChannelSpec channel_spec_from_json(const nlohmann::json& j);

nlohmann::json build_options_to_json(const BuildOptions& b);
BuildOptions build_options_from_json(const nlohmann::json& j);

nlohmann::json run_config_to_json(const RunConfig& rc);

// Parses and validates; throws ConfigError naming the offending file/field.
RunConfig load_run_config(const std::string& path);

} // namespace sijscc
