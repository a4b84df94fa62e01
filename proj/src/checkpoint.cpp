// SPDX-License-Identifier: Apache-2.0
#include "sijscc/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "sijscc/run_config.hpp"

namespace sijscc {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'S', 'J', 'C', 'K'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void write_tensor_map(std::ostream& out, const std::map<std::string, Tensor4<float>>& m) {
    put<uint64_t>(out, m.size());
    for (const auto& [name, t] : m) {
        put<uint32_t>(out, static_cast<uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        put<uint32_t>(out, t.b());
        put<uint32_t>(out, t.c());
        put<uint32_t>(out, t.h());
        put<uint32_t>(out, t.w());
        out.write(reinterpret_cast<const char*>(t.data()),
                  static_cast<std::streamsize>(t.size() * sizeof(float)));
    }
}

std::map<std::string, Tensor4<float>> read_tensor_map(std::istream& in) {
    std::map<std::string, Tensor4<float>> m;
    const uint64_t count = get<uint64_t>(in);
    for (uint64_t i = 0; i < count; ++i) {
        const uint32_t len = get<uint32_t>(in);
        std::string name(len, '\0');
        in.read(name.data(), len);
        const int b = static_cast<int>(get<uint32_t>(in));
        const int c = static_cast<int>(get<uint32_t>(in));
        const int h = static_cast<int>(get<uint32_t>(in));
        const int w = static_cast<int>(get<uint32_t>(in));
        Tensor4<float> t(b, c, h, w);
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.size() * sizeof(float)));
        m.emplace(std::move(name), std::move(t));
    }
    if (!in) throw CheckpointError("truncated checkpoint tensor section");
    return m;
}

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot write checkpoint: " + path);
    json meta{{"format_version", kVersion},
              {"model", model_config_to_json(ckpt.model)},
              {"build", build_options_to_json(ckpt.build)},
              {"train", train_config_to_json(ckpt.train)},
              {"step", ckpt.step},
              {"lr", ckpt.lr},
              {"best_val_loss", ckpt.best_val_loss},
              {"bad_evals", ckpt.bad_evals},
              {"rng", {{"data_cursor", ckpt.data_cursor}, {"snr_cursor", ckpt.snr_cursor}}}};
    const std::string meta_str = meta.dump();
    out.write(kMagic, 4);
    put<uint32_t>(out, kVersion);
    put<uint64_t>(out, meta_str.size());
    out.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));
    write_tensor_map(out, ckpt.weights);
    write_tensor_map(out, ckpt.momentum);
    if (!out) throw CheckpointError("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError("not a checkpoint file: " + path);
    const uint32_t version = get<uint32_t>(in);
    if (version != kVersion)
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version) +
                              " in " + path);
    const uint64_t meta_len = get<uint64_t>(in);
    std::string meta_str(meta_len, '\0');
    in.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
    if (!in) throw CheckpointError("truncated checkpoint metadata: " + path);
    json meta;
    try {
        meta = json::parse(meta_str);
    } catch (const json::parse_error& e) {
        throw CheckpointError("corrupt checkpoint metadata: " + std::string(e.what()));
    }
    Checkpoint ckpt;
    ckpt.model = model_config_from_json(meta.at("model"));
    ckpt.build = build_options_from_json(meta.at("build"));
    ckpt.train = train_config_from_json(meta.at("train"));
    ckpt.step = meta.at("step").get<long>();
    ckpt.lr = meta.at("lr").get<double>();
    ckpt.best_val_loss = meta.at("best_val_loss").get<double>();
    ckpt.bad_evals = meta.at("bad_evals").get<int>();
    ckpt.data_cursor = meta.at("rng").at("data_cursor").get<uint64_t>();
    ckpt.snr_cursor = meta.at("rng").at("snr_cursor").get<uint64_t>();
    ckpt.weights = read_tensor_map(in);
    ckpt.momentum = read_tensor_map(in);
    return ckpt;
}

Checkpoint snapshot_weights(Codec<float>& codec, const TrainConfig& train) {
    Checkpoint ckpt;
    ckpt.model = codec.config();
    ckpt.build = codec.options();
    ckpt.train = train;
    ckpt.lr = train.lr;
    for (const auto& p : codec.params()) ckpt.weights.emplace(p.name, *p.value);
    return ckpt;
}

void apply_weights(Codec<float>& codec, const Checkpoint& ckpt) {
    auto params = codec.params();
    if (params.size() != ckpt.weights.size())
        throw CheckpointError("checkpoint incompatible: expected " +
                              std::to_string(params.size()) + " tensors, file has " +
                              std::to_string(ckpt.weights.size()));
    for (auto& p : params) {
        auto it = ckpt.weights.find(p.name);
        if (it == ckpt.weights.end())
            throw CheckpointError("checkpoint incompatible: missing tensor " + p.name);
        if (!p.value->same_shape(it->second))
            throw CheckpointError("checkpoint incompatible: shape mismatch for " + p.name);
        *p.value = it->second;
    }
}

std::unique_ptr<Codec<float>> codec_from_checkpoint(const Checkpoint& ckpt) {
    auto codec = std::make_unique<Codec<float>>(ckpt.model, ckpt.build);
    apply_weights(*codec, ckpt);
    return codec;
}

uint64_t weights_fingerprint(const Checkpoint& ckpt) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [name, t] : ckpt.weights) {
        feed(name.data(), name.size());
        feed(t.data(), t.size() * sizeof(float));
    }
    return h;
}

} // namespace sijscc
