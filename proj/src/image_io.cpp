#include "gaitdcs/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

namespace gaitdcs {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int header_int(std::istream& in, const std::string& path) {
    const std::string tok = header_token(in);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used == tok.size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::FormatError, path + ": bad PNM header field '" + tok + "'");
}

}  // namespace

GrayImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    const std::string magic = header_token(in);
    if (magic != "P5" && magic != "P6") throw Error(ErrorCode::FormatError, path + ": only binary P5/P6 supported");
    const int w = header_int(in, path);
    const int h = header_int(in, path);
    const int maxval = header_int(in, path);
    if (maxval > 255) throw Error(ErrorCode::FormatError, path + ": 16-bit PNM not supported");

    const int channels = magic == "P6" ? 3 : 1;
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * channels);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw Error(ErrorCode::FormatError, path + ": truncated");

    GrayImage img(w, h);
    const double rescale = 255.0 / maxval;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        double v;
        if (channels == 1) {
            v = raw[i];
        } else {
            v = 0.299 * raw[3 * i] + 0.587 * raw[3 * i + 1] + 0.114 * raw[3 * i + 2];
        }
        img.pixels[i] = static_cast<std::uint8_t>(std::min(255L, std::lround(v * rescale)));
    }
    return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

void write_mask_pgm(const std::string& path, const BinaryMask& mask) {
    GrayImage img(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) img.pixels[i] = mask.bits[i] ? 255 : 0;
    write_pgm(path, img);
}

BinaryMask read_mask_pgm(const std::string& path) {
    const GrayImage img = read_pnm(path);
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) mask.bits[i] = img.pixels[i] >= 128 ? 1 : 0;
    return mask;
}

}  // namespace gaitdcs
