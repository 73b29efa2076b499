#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaitdcs/image.hpp"

namespace gaitdcs::segmentation {

inline constexpr int kSilhouetteWidth = 96;
inline constexpr int kSilhouetteHeight = 160;

/// Inclusive-exclusive pixel box.
struct BoundingBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool operator==(const BoundingBox&) const = default;
};

/// A 96x160 binary mask; the classifier's canonical input.
class NormalizedSilhouette {
public:
    NormalizedSilhouette() : mask_(kSilhouetteWidth, kSilhouetteHeight) {}
    explicit NormalizedSilhouette(BinaryMask mask);

    const BinaryMask& mask() const { return mask_; }
    bool get(int x, int y) const { return mask_.get(x, y); }
    void set(int x, int y, bool v) { mask_.set(x, y, v); }

    bool operator==(const NormalizedSilhouette&) const = default;

private:
    BinaryMask mask_;
};

struct SegmentationParams {
    int threshold = 100;
    bool foreground_is_dark = true;
    double sigma = 1.0;  // <= 0 skips denoising
    int min_pixels = 50;
};

BinaryMask binarize(const GrayImage& img, int threshold, bool foreground_is_dark);

/// Separable Gaussian, radius ceil(3 sigma), edge-replicated borders.
GrayImage gaussian_denoise(const GrayImage& img, double sigma);

/// Normalized 1-D kernel of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

struct Components {
    std::vector<int> labels;  // 0 = background, 1..count
    std::vector<int> areas;   // areas[label], areas[0] unused
    int count = 0;
};

/// 8-connected component labeling (two-pass union-find).
Components label_components(const BinaryMask& mask);

BinaryMask remove_small_blobs(const BinaryMask& mask, int min_pixels);

/// Tight box around every set bit (all surviving blobs together).
BoundingBox largest_blob_bbox(const BinaryMask& mask);

NormalizedSilhouette normalize_silhouette(const BinaryMask& mask, const BoundingBox& box);

/// Full frame path: denoise, threshold, blob cleanup, crop and rescale.
NormalizedSilhouette segment_frame(const GrayImage& img, const SegmentationParams& params);

/// Same as segment_frame but with a precomputed foreground mask.
NormalizedSilhouette segment_mask(const BinaryMask& mask, int min_pixels);

/// Per-pixel median over a set of equally sized frames.
GrayImage median_background(std::span<const GrayImage> frames);

/// Foreground where |img - background| >= threshold.
BinaryMask subtract_background(const GrayImage& img, const GrayImage& background, int threshold);

}  // namespace gaitdcs::segmentation
