#include "gaitdcs/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gaitdcs::segmentation {

NormalizedSilhouette::NormalizedSilhouette(BinaryMask mask) : mask_(std::move(mask)) {
    if (mask_.width != kSilhouetteWidth || mask_.height != kSilhouetteHeight)
        throw Error(ErrorCode::DimensionMismatch, "silhouette must be 96x160, got " + std::to_string(mask_.width) + "x" +
                                                      std::to_string(mask_.height));
}

BinaryMask binarize(const GrayImage& img, int threshold, bool foreground_is_dark) {
    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const bool dark = img.pixels[i] < threshold;
        out.bits[i] = (dark == foreground_is_dark) ? 1 : 0;
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0)) throw Error(ErrorCode::NonPositiveSigma, "sigma must be > 0");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    const double sum = std::accumulate(k.begin(), k.end(), 0.0);
    for (auto& v : k) v /= sum;
    return k;
}

GrayImage gaussian_denoise(const GrayImage& img, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    const int w = img.width, h = img.height;
    if (w == 0 || h == 0) return img;

    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * img.at(std::clamp(x + i, 0, w - 1), y);
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
        }
    }
    return out;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

void unite(std::vector<int>& parent, int a, int b) {
    a = find_root(parent, a);
    b = find_root(parent, b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
}

}  // namespace

Components label_components(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    Components c;
    c.labels.assign(static_cast<std::size_t>(w) * h, 0);
    std::vector<int> parent{0};

    // First pass: provisional labels from the already-visited 8-neighbours.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.get(x, y)) continue;
            int label = 0;
            const int nb[4][2] = {{x - 1, y}, {x - 1, y - 1}, {x, y - 1}, {x + 1, y - 1}};
            for (const auto& n : nb) {
                if (!mask.in_bounds(n[0], n[1])) continue;
                const int l = c.labels[static_cast<std::size_t>(n[1]) * w + n[0]];
                if (l == 0) continue;
                if (label == 0) label = l;
                else unite(parent, label, l);
            }
            if (label == 0) {
                label = static_cast<int>(parent.size());
                parent.push_back(label);
            }
            c.labels[static_cast<std::size_t>(y) * w + x] = label;
        }
    }

    // Second pass: compact roots to 1..count in raster order.
    std::vector<int> remap(parent.size(), 0);
    c.areas.assign(1, 0);
    for (auto& l : c.labels) {
        if (l == 0) continue;
        const int root = find_root(parent, l);
        if (remap[root] == 0) {
            remap[root] = ++c.count;
            c.areas.push_back(0);
        }
        l = remap[root];
        ++c.areas[l];
    }
    return c;
}

BinaryMask remove_small_blobs(const BinaryMask& mask, int min_pixels) {
    if (min_pixels < 0) throw Error(ErrorCode::InvalidArgument, "min_pixels must be >= 0");
    if (min_pixels == 0) return mask;
    const auto comps = label_components(mask);
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < comps.labels.size(); ++i) {
        const int l = comps.labels[i];
        if (l != 0 && comps.areas[l] >= min_pixels) out.bits[i] = 1;
    }
    return out;
}

BoundingBox largest_blob_bbox(const BinaryMask& mask) {
    BoundingBox b{mask.width, mask.height, 0, 0};
    bool any = false;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            any = true;
            b.x0 = std::min(b.x0, x);
            b.y0 = std::min(b.y0, y);
            b.x1 = std::max(b.x1, x + 1);
            b.y1 = std::max(b.y1, y + 1);
        }
    }
    if (!any) throw Error(ErrorCode::NoForeground, "mask has no foreground pixels");
    return b;
}

NormalizedSilhouette normalize_silhouette(const BinaryMask& mask, const BoundingBox& box) {
    if (box.x0 < 0 || box.y0 < 0 || box.x1 > mask.width || box.y1 > mask.height || box.x0 >= box.x1 ||
        box.y0 >= box.y1)
        throw Error(ErrorCode::InvalidArgument, "bounding box outside the mask");

    const int bw = box.width();
    const int bh = box.height();
    const double scale = static_cast<double>(kSilhouetteHeight) / bh;
    const int scaled_w = std::max(1, static_cast<int>(std::lround(bw * scale)));
    // Negative pad means the scaled crop is wider than the canvas and is cut symmetrically.
    const int pad = (kSilhouetteWidth - scaled_w) / 2;

    BinaryMask out(kSilhouetteWidth, kSilhouetteHeight);
    for (int y = 0; y < kSilhouetteHeight; ++y) {
        const int sy = std::min(bh - 1, static_cast<int>((y + 0.5) / scale));
        for (int x = 0; x < kSilhouetteWidth; ++x) {
            const int xs = x - pad;
            if (xs < 0 || xs >= scaled_w) continue;
            const int sx = std::min(bw - 1, static_cast<int>((xs + 0.5) / scale));
            out.set(x, y, mask.get(box.x0 + sx, box.y0 + sy));
        }
    }
    return NormalizedSilhouette(std::move(out));
}

NormalizedSilhouette segment_mask(const BinaryMask& mask, int min_pixels) {
    const BinaryMask clean = remove_small_blobs(mask, min_pixels);
    return normalize_silhouette(clean, largest_blob_bbox(clean));
}

NormalizedSilhouette segment_frame(const GrayImage& img, const SegmentationParams& params) {
    const GrayImage smooth = params.sigma > 0 ? gaussian_denoise(img, params.sigma) : img;
    return segment_mask(binarize(smooth, params.threshold, params.foreground_is_dark), params.min_pixels);
}

GrayImage median_background(std::span<const GrayImage> frames) {
    if (frames.empty()) throw Error(ErrorCode::EmptyStream, "no frames for background model");
    const int w = frames.front().width, h = frames.front().height;
    for (const auto& f : frames)
        if (f.width != w || f.height != h) throw Error(ErrorCode::DimensionMismatch, "background frames differ in size");
    GrayImage bg(w, h);
    std::vector<std::uint8_t> column(frames.size());
    for (std::size_t i = 0; i < bg.pixels.size(); ++i) {
        for (std::size_t f = 0; f < frames.size(); ++f) column[f] = frames[f].pixels[i];
        auto mid = column.begin() + static_cast<std::ptrdiff_t>(column.size() / 2);
        std::nth_element(column.begin(), mid, column.end());
        bg.pixels[i] = *mid;
    }
    return bg;
}

BinaryMask subtract_background(const GrayImage& img, const GrayImage& background, int threshold) {
    if (img.width != background.width || img.height != background.height)
        throw Error(ErrorCode::DimensionMismatch, "frame and background differ in size");
    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.bits[i] = std::abs(int(img.pixels[i]) - int(background.pixels[i])) >= threshold ? 1 : 0;
    return out;
}

}  // namespace gaitdcs::segmentation
