#include "gaitdcs/hog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"

namespace gaitdcs::hog {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBinWidth = 180.0 / HogParams::kBins;
constexpr double kNormGuard = 1e-10;

std::size_t block_offset(int bx, int by) {
    return (static_cast<std::size_t>(by) * HogParams::kBlocksX + bx) * HogParams::kBlockLength;
}

}  // namespace

Gradients compute_gradients(const segmentation::NormalizedSilhouette& s) {
    const auto& m = s.mask();
    const int w = m.width, h = m.height;
    Gradients g{w, h, std::vector<double>(static_cast<std::size_t>(w) * h), std::vector<double>(static_cast<std::size_t>(w) * h)};
    auto v = [&](int x, int y) { return m.get(x, y) ? 1.0 : 0.0; };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double dx, dy;
            if (x == 0) dx = v(1, y) - v(0, y);
            else if (x == w - 1) dx = v(w - 1, y) - v(w - 2, y);
            else dx = 0.5 * (v(x + 1, y) - v(x - 1, y));
            if (y == 0) dy = v(x, 1) - v(x, 0);
            else if (y == h - 1) dy = v(x, h - 1) - v(x, h - 2);
            else dy = 0.5 * (v(x, y + 1) - v(x, y - 1));
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            g.gx[i] = dx;
            g.gy[i] = dy;
        }
    }
    return g;
}

CellGrid cell_histograms(const Gradients& g) {
    CellGrid grid;
    grid.cells.assign(static_cast<std::size_t>(HogParams::kCellsX) * HogParams::kCellsY, {});
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            const double dx = g.x_at(x, y);
            const double dy = g.y_at(x, y);
            const double mag = std::hypot(dx, dy);
            if (mag == 0.0) continue;
            double angle = std::atan2(dy, dx) * 180.0 / kPi;
            if (angle < 0) angle += 180.0;
            if (angle >= 180.0) angle -= 180.0;
            // Position relative to bin centres; bin b is centred at (b + 0.5) * width.
            const double pos = angle / kBinWidth - 0.5;
            const double lo_f = std::floor(pos);
            const double frac = pos - lo_f;
            const int lo = (static_cast<int>(lo_f) + HogParams::kBins) % HogParams::kBins;
            const int hi = (lo + 1) % HogParams::kBins;
            auto& cell = grid.cells[static_cast<std::size_t>(y / HogParams::kCellSize) * HogParams::kCellsX +
                                    x / HogParams::kCellSize];
            cell[lo] += mag * (1.0 - frac);
            cell[hi] += mag * frac;
        }
    }
    return grid;
}

HogVector extract(const segmentation::NormalizedSilhouette& s, const HogParams& p) {
    const CellGrid grid = cell_histograms(compute_gradients(s));
    HogVector out;
    out.values.resize(HogParams::kDimension);
    std::array<double, HogParams::kBlockLength> block{};
    for (int by = 0; by < HogParams::kBlocksY; ++by) {
        for (int bx = 0; bx < HogParams::kBlocksX; ++bx) {
            std::size_t k = 0;
            for (int cy = 0; cy < HogParams::kBlockCells; ++cy)
                for (int cx = 0; cx < HogParams::kBlockCells; ++cx)
                    for (double v : grid.at(bx + cx, by + cy)) block[k++] = v;

            double norm = 0;
            for (double v : block) norm += v * v;
            norm = std::sqrt(norm);
            float* dst = out.values.data() + block_offset(bx, by);
            if (norm < kNormGuard) {
                std::fill(dst, dst + HogParams::kBlockLength, 0.0f);
                continue;
            }
            double renorm = 0;
            for (double& v : block) {
                v = std::min(v / norm, p.l2hys_clip);
                renorm += v * v;
            }
            renorm = std::sqrt(renorm);
            for (std::size_t i = 0; i < block.size(); ++i)
                dst[i] = static_cast<float>(renorm < kNormGuard ? 0.0 : block[i] / renorm);
        }
    }
    return out;
}

std::vector<std::size_t> mirror_permutation() {
    std::vector<std::size_t> perm(HogParams::kDimension);
    constexpr int nb = HogParams::kBins;
    for (int by = 0; by < HogParams::kBlocksY; ++by) {
        for (int bx = 0; bx < HogParams::kBlocksX; ++bx) {
            const std::size_t dst_block = block_offset(bx, by);
            const std::size_t src_block = block_offset(HogParams::kBlocksX - 1 - bx, by);
            for (int cy = 0; cy < 2; ++cy) {
                for (int cx = 0; cx < 2; ++cx) {
                    for (int b = 0; b < nb; ++b) {
                        const std::size_t dst = dst_block + static_cast<std::size_t>((cy * 2 + cx) * nb + b);
                        const std::size_t src = src_block + static_cast<std::size_t>((cy * 2 + (1 - cx)) * nb + (nb - 1 - b));
                        perm[dst] = src;
                    }
                }
            }
        }
    }
    return perm;
}

void write_feature_dump(const std::string& path, std::span<const HogVector> features) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
    const std::size_t dim = features.empty() ? HogParams::kDimension : features.front().size();
    detail::write_magic(out, "HOGV");
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(features.size()));
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
    for (const auto& f : features) {
        if (f.size() != dim) throw Error(ErrorCode::DimensionMismatch, "feature dump rows differ in length");
        for (float v : f.values) detail::write_f32(out, v);
    }
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

std::vector<HogVector> read_feature_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    detail::expect_magic(in, "HOGV", path);
    const auto count = detail::read_le<std::uint32_t>(in);
    const auto dim = detail::read_le<std::uint32_t>(in);
    std::vector<HogVector> out(count);
    for (auto& f : out) {
        f.values.resize(dim);
        for (auto& v : f.values) v = detail::read_f32(in);
    }
    return out;
}

}  // namespace gaitdcs::hog
