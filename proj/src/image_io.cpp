// SPDX-License-Identifier: Apache-2.0
#include "sijscc/image_io.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "sijscc/errors.hpp"

namespace sijscc {

namespace {

// next whitespace-separated token, skipping '#' comments
std::string next_token(std::istream& in) {
    std::string tok;
    while (in) {
        int ch = in.get();
        if (ch == EOF) break;
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

} // namespace

Tensor4<float> load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open image: " + path);
    std::string magic = next_token(in);
    int channels;
    if (magic == "P6")
        channels = 3;
    else if (magic == "P5")
        channels = 1;
    else
        throw IngestError("unsupported image format in " + path + " (expected P5/P6)");
    const std::string ws = next_token(in), hs = next_token(in), maxs = next_token(in);
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        maxval = std::stoi(maxs);
    } catch (const std::exception&) {
        throw IngestError("malformed header in " + path);
    }
    if (w <= 0 || h <= 0 || maxval != 255)
        throw IngestError("unsupported dimensions/maxval in " + path);
    std::vector<unsigned char> raw(static_cast<size_t>(w) * h * channels);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        throw IngestError("truncated pixel data in " + path);
    Tensor4<float> img(1, channels, h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c)
                img(0, c, y, x) =
                    raw[(static_cast<size_t>(y) * w + x) * channels + c] / 255.0f;
    return img;
}

void save_image(const std::string& path, const Tensor4<float>& img) {
    if (img.c() != 1 && img.c() != 3)
        throw ShapeError("save_image: expected 1 or 3 channels, got " + img.shape_str());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write image: " + path);
    out << (img.c() == 3 ? "P6" : "P5") << "\n" << img.w() << " " << img.h() << "\n255\n";
    std::vector<unsigned char> raw(static_cast<size_t>(img.w()) * img.h() * img.c());
    for (int y = 0; y < img.h(); ++y)
        for (int x = 0; x < img.w(); ++x)
            for (int c = 0; c < img.c(); ++c) {
                float v = std::min(1.0f, std::max(0.0f, img(0, c, y, x)));
                raw[(static_cast<size_t>(y) * img.w() + x) * img.c() + c] =
                    static_cast<unsigned char>(std::lround(v * 255.0f));
            }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

bool has_image_extension(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return false;
    std::string ext = path.substr(dot + 1);
    return ext == "ppm" || ext == "pgm";
}

} // namespace sijscc
