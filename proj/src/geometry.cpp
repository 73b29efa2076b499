#include "gaitdcs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace gaitdcs::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSingularDet = 1e-12;
constexpr double kInfinityW = 1e-12;

double triangle_area(PixelPoint a, PixelPoint b, PixelPoint c) {
    return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Similarity that moves the centroid to the origin and the mean distance to sqrt(2).
Eigen::Matrix3d hartley_transform(const Quad& q) {
    double cx = 0, cy = 0;
    for (const auto& p : q) {
        cx += p.x;
        cy += p.y;
    }
    cx /= 4.0;
    cy /= 4.0;
    double mean_dist = 0;
    for (const auto& p : q) mean_dist += std::hypot(p.x - cx, p.y - cy);
    mean_dist /= 4.0;
    const double s = std::sqrt(2.0) / mean_dist;
    Eigen::Matrix3d t;
    t << s, 0, -s * cx,
         0, s, -s * cy,
         0, 0, 1;
    return t;
}

PixelPoint transform(const Eigen::Matrix3d& t, PixelPoint p) {
    const Eigen::Vector3d v = t * Eigen::Vector3d(p.x, p.y, 1.0);
    return {v.x() / v.z(), v.y() / v.z()};
}

}  // namespace

Eigen::Matrix3d HomographyMatrix::canonical(const Eigen::Matrix3d& m) {
    const double norm = m.norm();
    if (!std::isfinite(norm) || norm == 0.0) throw Error(ErrorCode::SingularSystem, "zero or non-finite homography");
    Eigen::Matrix3d out = m / norm;
    const double cutoff = 1e-9 * out.cwiseAbs().maxCoeff();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (std::abs(out(r, c)) > cutoff) {
                if (out(r, c) < 0) out = -out;
                return out;
            }
        }
    }
    return out;
}

HomographyMatrix::HomographyMatrix(const Eigen::Matrix3d& m) : m_(canonical(m)) {
    if (std::abs(m_.determinant()) <= kSingularDet) throw Error(ErrorCode::SingularSystem, "homography is singular");
}

HomographyMatrix HomographyMatrix::inverse() const {
    Eigen::FullPivLU<Eigen::Matrix3d> lu(m_);
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "homography is not invertible");
    return HomographyMatrix(lu.inverse());
}

HomographyMatrix HomographyMatrix::compose(const HomographyMatrix& first) const {
    return HomographyMatrix(m_ * first.m_);
}

HomogeneousPoint to_homogeneous(PixelPoint p) { return {p.x, p.y, 1.0}; }

PixelPoint dehomogenize(HomogeneousPoint p) {
    if (std::abs(p.w) < kInfinityW) throw Error(ErrorCode::PointAtInfinity, "w is zero");
    return {p.x / p.w, p.y / p.w};
}

bool is_generic_quad(const Quad& q) {
    double x0 = q[0].x, x1 = q[0].x, y0 = q[0].y, y1 = q[0].y;
    for (const auto& p : q) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double bbox = (x1 - x0) * (y1 - y0);
    if (!(bbox > 0)) return false;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (triangle_area(q[i], q[j], q[k]) <= 1e-9 * bbox) return false;
    return true;
}

HomographyMatrix estimate_homography(const Quad& src, const Quad& dst) {
    if (!is_generic_quad(src)) throw Error(ErrorCode::DegenerateQuad, "source quad has three collinear points");
    if (!is_generic_quad(dst)) throw Error(ErrorCode::DegenerateQuad, "target quad has three collinear points");

    const Eigen::Matrix3d ts = hartley_transform(src);
    const Eigen::Matrix3d td = hartley_transform(dst);

    Eigen::Matrix<double, 8, 9> a;
    for (int i = 0; i < 4; ++i) {
        const PixelPoint s = transform(ts, src[i]);
        const PixelPoint d = transform(td, dst[i]);
        a.row(2 * i) << -s.x, -s.y, -1, 0, 0, 0, d.x * s.x, d.x * s.y, d.x;
        a.row(2 * i + 1) << 0, 0, 0, -s.x, -s.y, -1, d.y * s.x, d.y * s.y, d.y;
    }

    // Full V is needed: the null vector of an 8x9 system lives in the last column.
    Eigen::JacobiSVD<Eigen::Matrix<double, 8, 9>> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(7) <= 1e-12 * sv(0)) throw Error(ErrorCode::SingularSystem, "design matrix is rank-deficient");

    const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    return HomographyMatrix(td.inverse() * hn * ts);
}

PixelPoint apply_homography(const HomographyMatrix& h, PixelPoint p) {
    const Eigen::Vector3d v = h.matrix() * Eigen::Vector3d(p.x, p.y, 1.0);
    return dehomogenize({v.x(), v.y(), v.z()});
}

GrayImage warp_image(const GrayImage& img, const HomographyMatrix& h, int out_width, int out_height) {
    if (out_width < 1 || out_height < 1) throw Error(ErrorCode::InvalidArgument, "warp output dimensions must be >= 1");
    const Eigen::Matrix3d inv = h.inverse().matrix();
    GrayImage out(out_width, out_height, 0);
    const double max_x = img.width - 1;
    const double max_y = img.height - 1;
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            const Eigen::Vector3d s = inv * Eigen::Vector3d(x, y, 1.0);
            if (std::abs(s.z()) < kInfinityW) continue;
            double sx = s.x() / s.z();
            double sy = s.y() / s.z();
            // Snap values within rounding noise of the border back inside.
            if (sx < 0 && sx > -1e-9) sx = 0;
            if (sy < 0 && sy > -1e-9) sy = 0;
            if (sx > max_x && sx < max_x + 1e-9) sx = max_x;
            if (sy > max_y && sy < max_y + 1e-9) sy = max_y;
            if (!(sx >= 0 && sy >= 0 && sx <= max_x && sy <= max_y)) continue;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const int y1 = std::min(y0 + 1, img.height - 1);
            const double fx = sx - x0;
            const double fy = sy - y0;
            const double top = (1 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
            const double bottom = (1 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
            const double v = (1 - fy) * top + fy * bottom;
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

std::optional<ElevationPreset> preset_for_elevation(double phi, std::span<const ElevationPreset> presets) {
    if (!(phi >= 0)) throw Error(ErrorCode::InvalidArgument, "elevation must be non-negative");
    if (phi >= 60.0) throw Error(ErrorCode::UncorrectableElevation, "elevation " + std::to_string(phi) + " >= 60 degrees");
    if (phi < 5.0) return std::nullopt;
    const ElevationPreset* best = nullptr;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& p : presets) {
        const double gap = std::abs(p.phi - phi);
        if (gap < best_gap) {
            best_gap = gap;
            best = &p;
        }
    }
    if (best == nullptr || best_gap > 5.0) return std::nullopt;
    return *best;
}

ElevationPreset make_preset(double phi, const Quad& src, const Quad& dst) {
    if (!(phi >= 0 && phi < 60)) throw Error(ErrorCode::UncorrectableElevation, "preset elevation outside [0, 60)");
    return {phi, src, dst, estimate_homography(src, dst)};
}

ElevationPreset vertical_plane_preset(double phi, int frame_width, int frame_height, double focal_px) {
    const double t = phi * kPi / 180.0;
    const Eigen::Vector3d fwd(0, -std::sin(t), std::cos(t));
    const Eigen::Vector3d up(0, std::cos(t), std::sin(t));
    const Eigen::Vector3d right(1, 0, 0);
    // Plane Z = 1 with its centre on the optical axis.
    const Eigen::Vector3d centre(0, -std::tan(t), 1.0);
    const double range = centre.norm();
    const double half_w = 0.25 * frame_width * range / focal_px;
    const double half_h = 0.35 * frame_height * range / focal_px;
    const double cx = 0.5 * frame_width;
    const double cy = 0.5 * frame_height;

    auto project = [&](double px, double py) {
        const Eigen::Vector3d p(px, centre.y() + py, 1.0);
        const double depth = fwd.dot(p);
        return PixelPoint{cx + focal_px * right.dot(p) / depth, cy - focal_px * up.dot(p) / depth};
    };
    const Quad src{project(-half_w, half_h), project(half_w, half_h), project(half_w, -half_h), project(-half_w, -half_h)};
    const double tw = focal_px * half_w / range;
    const double th = focal_px * half_h / range;
    const Quad dst{PixelPoint{cx - tw, cy - th}, PixelPoint{cx + tw, cy - th}, PixelPoint{cx + tw, cy + th},
                   PixelPoint{cx - tw, cy + th}};
    return make_preset(phi, src, dst);
}

std::vector<ElevationPreset> read_presets(std::istream& in) {
    std::vector<ElevationPreset> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto bar = line.find('|');
        auto fail = [&](const std::string& why) {
            return Error(ErrorCode::FormatError, "preset line " + std::to_string(lineno) + ": " + why);
        };
        if (bar == std::string::npos) throw fail("missing '|' separator");
        std::istringstream left(line.substr(0, bar));
        std::istringstream right(line.substr(bar + 1));
        double phi = 0;
        Quad src{}, dst{};
        if (!(left >> phi)) throw fail("missing elevation");
        for (auto& p : src)
            if (!(left >> p.x >> p.y)) throw fail("source quad needs 8 numbers");
        for (auto& p : dst)
            if (!(right >> p.x >> p.y)) throw fail("target quad needs 8 numbers");
        std::string extra;
        if (left >> extra || right >> extra) throw fail("trailing tokens");
        out.push_back(make_preset(phi, src, dst));
    }
    return out;
}

std::vector<ElevationPreset> load_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open preset file " + path);
    return read_presets(in);
}

void write_presets(std::ostream& out, std::span<const ElevationPreset> presets) {
    out << std::setprecision(17);
    for (const auto& p : presets) {
        out << p.phi;
        for (const auto& q : p.source_quad) out << ' ' << q.x << ' ' << q.y;
        out << " |";
        for (const auto& q : p.target_quad) out << ' ' << q.x << ' ' << q.y;
        out << '\n';
    }
}

}  // namespace gaitdcs::geometry
