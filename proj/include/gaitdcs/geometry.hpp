#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gaitdcs/image.hpp"

namespace gaitdcs::geometry {

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

struct HomogeneousPoint {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
};

using Quad = std::array<PixelPoint, 4>;

/// 3x3 projective map held at canonical scale: Frobenius norm 1 and the first
/// nonzero entry (row-major) positive. Construction rejects singular input.
class HomographyMatrix {
public:
    HomographyMatrix() : HomographyMatrix(Eigen::Matrix3d::Identity()) {}
    explicit HomographyMatrix(const Eigen::Matrix3d& m);

    const Eigen::Matrix3d& matrix() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

    HomographyMatrix inverse() const;
    /// Canonical form of `*this` applied after `first`.
    HomographyMatrix compose(const HomographyMatrix& first) const;

    static Eigen::Matrix3d canonical(const Eigen::Matrix3d& m);

private:
    Eigen::Matrix3d m_;
};

struct ElevationPreset {
    double phi = 0.0;  // degrees
    Quad source_quad{};
    Quad target_quad{};
    HomographyMatrix matrix;
};

HomogeneousPoint to_homogeneous(PixelPoint p);
PixelPoint dehomogenize(HomogeneousPoint p);

/// Four-point DLT with Hartley conditioning. Maps src[i] onto dst[i].
HomographyMatrix estimate_homography(const Quad& src, const Quad& dst);

PixelPoint apply_homography(const HomographyMatrix& h, PixelPoint p);

/// Inverse-mapped bilinear warp; samples falling outside the source are 0.
GrayImage warp_image(const GrayImage& img, const HomographyMatrix& h, int out_width, int out_height);

/// Nearest preset within 5 degrees; none when phi < 5 (no correction needed).
std::optional<ElevationPreset> preset_for_elevation(double phi, std::span<const ElevationPreset> presets);

/// True when no three points are collinear (triangle area > 1e-9 x bbox area).
bool is_generic_quad(const Quad& q);

ElevationPreset make_preset(double phi, const Quad& src, const Quad& dst);

/// Preset for a pinhole camera pitched down by `phi` degrees looking at a
/// vertical plane centred on the optical axis. The source quad is the image of
/// a plane rectangle, the target quad the same rectangle without keystone.
ElevationPreset vertical_plane_preset(double phi, int frame_width, int frame_height, double focal_px);

/// Preset file: `phi x1 y1 .. x4 y4 | u1 v1 .. u4 v4` per line; `#` comments.
std::vector<ElevationPreset> read_presets(std::istream& in);
std::vector<ElevationPreset> load_presets(const std::string& path);
void write_presets(std::ostream& out, std::span<const ElevationPreset> presets);

}  // namespace gaitdcs::geometry
