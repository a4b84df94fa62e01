// SPDX-License-Identifier: Apache-2.0
#include "sijscc/symbol_file.hpp"

#include <cstring>
#include <fstream>

namespace sijscc {

namespace {

constexpr char kMagic[4] = {'S', 'J', 'S', 'C'};
constexpr uint16_t kVersion = 1;

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

} // namespace

void write_symbol_file(const std::string& path, const ComplexSymbolVector& z, uint16_t t,
                       uint32_t h, uint32_t w, float snr_db) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write symbol file: " + path);
    out.write(kMagic, 4);
    put<uint16_t>(out, kVersion);
    put<uint64_t>(out, z.k());
    put<uint16_t>(out, t);
    put<uint32_t>(out, h);
    put<uint32_t>(out, w);
    put<float>(out, snr_db);
    for (const auto& s : z.symbols) {
        put<float>(out, s.real());
        put<float>(out, s.imag());
    }
    if (!out) throw IngestError("short write on symbol file: " + path);
}

SymbolFile read_symbol_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open symbol file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IngestError("not a symbol file: " + path);
    if (get<uint16_t>(in) != kVersion)
        throw IngestError("unsupported symbol file version in " + path);
    SymbolFile f;
    f.k = get<uint64_t>(in);
    f.t = get<uint16_t>(in);
    f.h = get<uint32_t>(in);
    f.w = get<uint32_t>(in);
    f.snr_db = get<float>(in);
    f.symbols.symbols.resize(f.k);
    for (uint64_t i = 0; i < f.k; ++i) {
        float re = get<float>(in);
        float im = get<float>(in);
        f.symbols.symbols[i] = {re, im};
    }
    if (!in) throw IngestError("truncated symbol file: " + path);
    return f;
}

} // namespace sijscc
