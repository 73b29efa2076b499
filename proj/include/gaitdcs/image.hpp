#pragma once

#include <cstdint>
#include <vector>

#include "gaitdcs/error.hpp"

namespace gaitdcs {

/// Row-major 8-bit intensity raster.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0) : width(w), height(h), pixels(checked_size(w, h), fill) {}

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;

    static std::size_t checked_size(int w, int h) {
        if (w < 0 || h < 0) throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
        return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    }
};

/// Row-major boolean raster. Stored as bytes (0/1) so rows can be viewed as spans.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false) : width(w), height(h), bits(GrayImage::checked_size(w, h), fill ? 1 : 0) {}

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }

    bool operator==(const BinaryMask&) const = default;
};

}  // namespace gaitdcs
