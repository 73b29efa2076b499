#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gaitdcs/segmentation.hpp"

namespace gaitdcs::hog {

/// Fixed descriptor geometry: 4x4-pixel cells, 2x2-cell blocks at a one-cell
/// stride, 9 unsigned orientation bins, L2-Hys block normalization.
struct HogParams {
    static constexpr int kCellSize = 4;
    static constexpr int kBlockCells = 2;
    static constexpr int kBins = 9;
    static constexpr int kCellsX = segmentation::kSilhouetteWidth / kCellSize;   // 24
    static constexpr int kCellsY = segmentation::kSilhouetteHeight / kCellSize;  // 40
    static constexpr int kBlocksX = kCellsX - kBlockCells + 1;                    // 23
    static constexpr int kBlocksY = kCellsY - kBlockCells + 1;                    // 39
    static constexpr int kBlockLength = kBlockCells * kBlockCells * kBins;        // 36
    static constexpr std::size_t kDimension = std::size_t{kBlocksX} * kBlocksY * kBlockLength;

    double l2hys_clip = 0.2;
};

static_assert(HogParams::kDimension == 32292);

struct HogVector {
    std::vector<float> values;

    std::size_t size() const { return values.size(); }
    bool operator==(const HogVector&) const = default;
};

struct Gradients {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;

    double x_at(int x, int y) const { return gx[static_cast<std::size_t>(y) * width + x]; }
    double y_at(int x, int y) const { return gy[static_cast<std::size_t>(y) * width + x]; }
};

/// 24x40 grid of 9-bin histograms, row-major over cells.
struct CellGrid {
    std::vector<std::array<double, HogParams::kBins>> cells;

    const std::array<double, HogParams::kBins>& at(int cx, int cy) const {
        return cells[static_cast<std::size_t>(cy) * HogParams::kCellsX + cx];
    }
};

/// Centered [-1, 0, 1] differences; one-sided at the image border.
Gradients compute_gradients(const segmentation::NormalizedSilhouette& s);

/// Magnitude-weighted votes, linearly split between the two nearest bins
/// (centres at 10, 30, ..., 170 degrees, wrapping at 180).
CellGrid cell_histograms(const Gradients& g);

HogVector extract(const segmentation::NormalizedSilhouette& s, const HogParams& p = {});

/// perm[i] is the index in the original descriptor whose value lands at
/// index i of the descriptor of the horizontally mirrored silhouette.
std::vector<std::size_t> mirror_permutation();

/// Feature dump: "HOGV", u32 count, u32 dim, count*dim little-endian f32.
void write_feature_dump(const std::string& path, std::span<const HogVector> features);
std::vector<HogVector> read_feature_dump(const std::string& path);

}  // namespace gaitdcs::hog
