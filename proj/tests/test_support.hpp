#pragma once

#include <cstdint>
#include <random>

#include "gaitdcs/image.hpp"
#include "gaitdcs/segmentation.hpp"

namespace testing {

inline gaitdcs::BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
    std::bernoulli_distribution on(density);
    gaitdcs::BinaryMask m(w, h);
    for (auto& b : m.bits) b = on(rng) ? 1 : 0;
    return m;
}

inline gaitdcs::segmentation::NormalizedSilhouette random_silhouette(std::mt19937_64& rng, double density = 0.3) {
    return gaitdcs::segmentation::NormalizedSilhouette(random_mask(rng, 96, 160, density));
}

inline gaitdcs::segmentation::NormalizedSilhouette rect_silhouette(int x0, int y0, int x1, int y1) {
    gaitdcs::segmentation::NormalizedSilhouette s;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) s.set(x, y, true);
    return s;
}

inline gaitdcs::BinaryMask mirror(const gaitdcs::BinaryMask& m) {
    gaitdcs::BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) out.set(m.width - 1 - x, y, m.get(x, y));
    return out;
}

}  // namespace testing
