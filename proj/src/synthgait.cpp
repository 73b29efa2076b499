#include "gaitdcs/synthgait.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gaitdcs::synthgait {

namespace {

using trajectory::Joint;
using trajectory::Vec3;

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint8_t kForeground = 40;
constexpr std::uint8_t kBackground = 210;
constexpr double kMaxJitter = 22.5;

double rad(double deg) { return deg * kPi / 180.0; }

// Uniform [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementations so corpora are reproducible across toolchains.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

struct Capsule3 {
    Vec3 a, b;
    double radius;
};

struct Capsule2 {
    double ax, ay, bx, by, radius;
};

Vec3 midpoint(const Vec3& p, const Vec3& q) { return {(p.x + q.x) / 2, (p.y + q.y) / 2, (p.z + q.z) / 2}; }

Vec3 toe_point(const Vec3& knee, const Vec3& ankle, double length) {
    double dy = ankle.y - knee.y, dz = ankle.z - knee.z;
    const double n = std::hypot(dy, dz);
    dy /= n;
    dz /= n;
    // Perpendicular to the shin, pointing forward; keep the toe from dipping far below the ankle.
    double py = dz, pz = -dy;
    py = std::max(py, -0.3);
    const double m = std::hypot(py, pz);
    return {ankle.x, ankle.y + length * py / m, ankle.z + length * pz / m};
}

std::vector<Capsule3> body_capsules(const BodyModel& body, PoseIndex pose, double radius_scale) {
    const auto s = trajectory::pose_skeleton(body.dims, body.keyframes[static_cast<std::size_t>(pose.value() - 1)]);
    const auto& w = body.widths;
    const Vec3 pelvis = midpoint(s[Joint::LHip], s[Joint::RHip]);
    const Vec3 neck = midpoint(s[Joint::LShoulder], s[Joint::RShoulder]);
    auto r = [&](double v) { return v * radius_scale; };
    return {
        {s[Joint::Head], s[Joint::Head], r(w.head)},
        {neck, s[Joint::Head], r(w.neck)},
        {pelvis, neck, r(w.torso_core)},
        {s[Joint::LHip], s[Joint::LShoulder], r(w.torso_side)},
        {s[Joint::RHip], s[Joint::RShoulder], r(w.torso_side)},
        {s[Joint::LShoulder], s[Joint::LElbow], r(w.upper_arm)},
        {s[Joint::LElbow], s[Joint::LWrist], r(w.forearm)},
        {s[Joint::RShoulder], s[Joint::RElbow], r(w.upper_arm)},
        {s[Joint::RElbow], s[Joint::RWrist], r(w.forearm)},
        {s[Joint::LHip], s[Joint::LKnee], r(w.thigh)},
        {s[Joint::LKnee], s[Joint::LAnkle], r(w.shin)},
        {s[Joint::LAnkle], toe_point(s[Joint::LKnee], s[Joint::LAnkle], body.foot_length), r(w.foot)},
        {s[Joint::RHip], s[Joint::RKnee], r(w.thigh)},
        {s[Joint::RKnee], s[Joint::RAnkle], r(w.shin)},
        {s[Joint::RAnkle], toe_point(s[Joint::RKnee], s[Joint::RAnkle], body.foot_length), r(w.foot)},
    };
}

// Orthographic camera: image right and image up vectors in the body frame.
struct Projection {
    Vec3 right, up;

    Projection(double azimuth_deg, double elevation_deg) {
        const double t = rad(azimuth_deg), p = rad(elevation_deg);
        right = {std::cos(t), 0.0, -std::sin(t)};
        up = {-std::sin(p) * std::sin(t), std::cos(p), -std::sin(p) * std::cos(t)};
    }
    double u(const Vec3& v) const { return right.x * v.x + right.y * v.y + right.z * v.z; }
    double v(const Vec3& q) const { return up.x * q.x + up.y * q.y + up.z * q.z; }
};

double azimuth_of(const RenderSpec& spec) {
    if (std::abs(spec.orientation_jitter) > kMaxJitter + 1e-9)
        throw Error(ErrorCode::InvalidArgument, "orientation jitter outside +-22.5 degrees");
    return viewpoint_azimuth(spec.viewpoint) + spec.orientation_jitter;
}

std::vector<Capsule2> project(const std::vector<Capsule3>& caps, const Projection& proj) {
    std::vector<Capsule2> out;
    out.reserve(caps.size());
    for (const auto& c : caps) out.push_back({proj.u(c.a), proj.v(c.a), proj.u(c.b), proj.v(c.b), c.radius});
    return out;
}

void rasterize(GrayImage& img, const Capsule2& c, const FrameLayout& l) {
    const double s = l.pixels_per_unit;
    const double ax = l.centre_x + s * c.ax, ay = l.ground_y - s * c.ay;
    const double bx = l.centre_x + s * c.bx, by = l.ground_y - s * c.by;
    const double r = s * c.radius;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - r)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(std::max(ax, bx) + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - r)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(std::max(ay, by) + r)));
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double px = x + 0.5 - ax, py = y + 0.5 - ay;
            const double t = len2 > 0 ? std::clamp((px * dx + py * dy) / len2, 0.0, 1.0) : 0.0;
            const double ex = px - t * dx, ey = py - t * dy;
            if (ex * ex + ey * ey <= r * r) img.at(x, y) = kForeground;
        }
    }
}

RenderSpec walk_render_spec(StateLabel s, const WalkSpec& spec, std::mt19937_64& rng, std::uint64_t seed) {
    RenderSpec r;
    r.pose = s.pose;
    r.viewpoint = s.viewpoint;
    r.orientation_jitter = uniform(rng, -spec.walk_jitter, spec.walk_jitter);
    r.elevation = spec.elevation;
    r.noise_level = spec.noise_level;
    r.seed = seed;
    return r;
}

}  // namespace

PathKind parse_path_kind(const std::string& s) {
    if (s == "straight") return PathKind::Straight;
    if (s == "circle") return PathKind::Circle;
    if (s == "figure8") return PathKind::Figure8;
    throw Error(ErrorCode::InvalidArgument, "unknown path kind '" + s + "'");
}

std::string to_string(PathKind k) {
    switch (k) {
        case PathKind::Straight: return "straight";
        case PathKind::Circle: return "circle";
        case PathKind::Figure8: return "figure8";
    }
    return "straight";
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return splitmix(seed + h);
}

double viewpoint_azimuth(ViewpointIndex v) { return (v.value() - 3) * 45.0; }

FrameLayout fitted_layout(const RenderSpec& spec, const BodyModel& body, double pixels_per_unit) {
    const Projection proj(azimuth_of(spec), spec.elevation);
    // Size for the widest capsules a noisy render can produce.
    const auto caps = project(body_capsules(body, spec.pose, 1.2), proj);
    double u0 = 1e9, u1 = -1e9, v0 = 1e9, v1 = -1e9;
    for (const auto& c : caps) {
        u0 = std::min({u0, c.ax - c.radius, c.bx - c.radius});
        u1 = std::max({u1, c.ax + c.radius, c.bx + c.radius});
        v0 = std::min({v0, c.ay - c.radius, c.by - c.radius});
        v1 = std::max({v1, c.ay + c.radius, c.by + c.radius});
    }
    constexpr int margin = 8;
    FrameLayout l;
    l.pixels_per_unit = pixels_per_unit;
    l.width = static_cast<int>(std::ceil((u1 - u0) * pixels_per_unit)) + 2 * margin;
    l.height = static_cast<int>(std::ceil((v1 - v0) * pixels_per_unit)) + 2 * margin;
    l.centre_x = margin - u0 * pixels_per_unit;
    l.ground_y = margin + v1 * pixels_per_unit;
    return l;
}

GrayImage render_frame(const RenderSpec& spec, const BodyModel& body, const FrameLayout& layout) {
    if (spec.noise_level < 0 || spec.noise_level > 1) throw Error(ErrorCode::InvalidArgument, "noise_level must be in [0, 1]");
    std::mt19937_64 rng(spec.seed);
    // Boundary erosion/dilation: a global radius offset that scales with noise.
    const double radius_scale = 1.0 + uniform(rng, -0.5, 0.5) * spec.noise_level;
    const Projection proj(azimuth_of(spec), spec.elevation);

    GrayImage img(layout.width, layout.height, kBackground);
    for (const auto& c : project(body_capsules(body, spec.pose, radius_scale), proj)) rasterize(img, c, layout);

    if (spec.noise_level > 0) {
        for (auto& p : img.pixels) {
            if (uniform01(rng) < spec.noise_level) p = uniform01(rng) < 0.5 ? 0 : 255;
        }
    }
    return img;
}

segmentation::NormalizedSilhouette render_silhouette(const RenderSpec& spec, const BodyModel& body) {
    const GrayImage frame = render_frame(spec, body, fitted_layout(spec, body));
    return segmentation::segment_frame(frame, segmentation::SegmentationParams{});
}

std::vector<LabeledSilhouette> generate_dataset(int n_per_class, double noise, std::uint64_t seed, const BodyModel& body,
                                                double elevation) {
    if (n_per_class < 1) throw Error(ErrorCode::InvalidArgument, "n_per_class must be >= 1");
    std::vector<LabeledSilhouette> out;
    out.reserve(static_cast<std::size_t>(kStateCount) * n_per_class);
    std::mt19937_64 rng(derive_seed(seed, "dataset"));
    for (const auto& label : all_states()) {
        for (int i = 0; i < n_per_class; ++i) {
            RenderSpec spec;
            spec.pose = label.pose;
            spec.viewpoint = label.viewpoint;
            spec.orientation_jitter = uniform(rng, -kMaxJitter, kMaxJitter);
            spec.elevation = elevation;
            spec.noise_level = noise;
            spec.seed = rng();
            out.push_back({label, render_silhouette(spec, body)});
        }
    }
    return out;
}

std::vector<StateLabel> walk_schedule(const WalkSpec& spec) {
    if (spec.frames_per_pose < 1) throw Error(ErrorCode::InvalidArgument, "frames_per_pose must be >= 1");
    if (spec.cycles < 1) throw Error(ErrorCode::InvalidArgument, "cycles must be >= 1");
    int gait_cycles = spec.cycles;
    if (spec.path_kind == PathKind::Circle) gait_cycles *= kCycleLength;
    if (spec.path_kind == PathKind::Figure8) gait_cycles *= 2 * kCycleLength;

    std::vector<StateLabel> out;
    out.reserve(static_cast<std::size_t>(gait_cycles) * kCycleLength * spec.frames_per_pose);
    ViewpointIndex view = spec.start_viewpoint;
    for (int c = 0; c < gait_cycles; ++c) {
        if (c > 0) {
            switch (spec.path_kind) {
                case PathKind::Straight: break;
                case PathKind::Circle: view = view.prev(); break;
                case PathKind::Figure8: {
                    // Boundaries 1..8 of each 16-cycle loop turn left, the rest right.
                    const int b = c % (2 * kCycleLength);
                    view = (b >= 1 && b <= kCycleLength) ? view.next() : view.prev();
                    break;
                }
            }
        }
        for (int p = 1; p <= kCycleLength; ++p)
            for (int f = 0; f < spec.frames_per_pose; ++f) out.push_back({PoseIndex(p), view});
    }
    return out;
}

Walk generate_walk(const WalkSpec& spec, const BodyModel& body) {
    Walk walk;
    walk.truth = walk_schedule(spec);
    std::mt19937_64 rng(derive_seed(spec.seed, "walk"));
    walk.frames.reserve(walk.truth.size());
    for (const auto& s : walk.truth) {
        const RenderSpec r = walk_render_spec(s, spec, rng, rng());
        FrameLayout l;
        l.width = spec.frame_width;
        l.height = spec.frame_height;
        l.pixels_per_unit = 0.7 * spec.frame_height / 1.75 * uniform(rng, 0.9, 1.05);
        l.centre_x = 0.5 * spec.frame_width + uniform(rng, -8.0, 8.0);
        l.ground_y = 0.92 * spec.frame_height + uniform(rng, -4.0, 4.0);
        walk.frames.push_back(render_frame(r, body, l));
    }
    return walk;
}

std::vector<segmentation::NormalizedSilhouette> walk_silhouettes(const Walk& walk,
                                                                 const segmentation::SegmentationParams& params) {
    std::vector<segmentation::NormalizedSilhouette> out;
    out.reserve(walk.frames.size());
    for (const auto& f : walk.frames) out.push_back(segmentation::segment_frame(f, params));
    return out;
}

}  // namespace gaitdcs::synthgait
