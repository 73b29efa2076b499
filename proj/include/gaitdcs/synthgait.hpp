#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gaitdcs/image.hpp"
#include "gaitdcs/segmentation.hpp"
#include "gaitdcs/state.hpp"
#include "gaitdcs/trajectory.hpp"

namespace gaitdcs::synthgait {

/// Capsule radii of the rendered figure (unitless).
struct LimbWidths {
    double head = 0.11;
    double neck = 0.05;
    double torso_side = 0.085;   // capsules from each hip to the shoulder on that side
    double torso_core = 0.11;    // capsule from pelvis centre to neck
    double upper_arm = 0.045;
    double forearm = 0.038;
    double thigh = 0.075;
    double shin = 0.055;
    double foot = 0.035;
};

struct BodyModel {
    trajectory::BodyDims dims;
    LimbWidths widths;
    double foot_length = 0.2;
    std::array<trajectory::JointAngles, kCycleLength> keyframes = trajectory::gait_keyframe_angles();
};

struct RenderSpec {
    PoseIndex pose;
    ViewpointIndex viewpoint;
    double orientation_jitter = 0.0;  // degrees, within +-22.5
    double elevation = 18.4;          // degrees
    double noise_level = 0.0;         // salt-and-pepper probability, [0, 1]
    std::uint64_t seed = 0;
};

/// Where the figure lands in a raw frame.
struct FrameLayout {
    int width = 0;
    int height = 0;
    double pixels_per_unit = 120.0;
    double centre_x = 0.0;  // image x of the body axis
    double ground_y = 0.0;  // image y of the ground contact
};

enum class PathKind { Straight, Circle, Figure8 };

PathKind parse_path_kind(const std::string& s);
std::string to_string(PathKind k);

struct WalkSpec {
    PathKind path_kind = PathKind::Straight;
    int frames_per_pose = 3;
    int cycles = 1;
    std::uint64_t seed = 0;
    ViewpointIndex start_viewpoint{1};
    double walk_jitter = 10.0;  // per-frame azimuth wobble, degrees
    double noise_level = 0.05;
    double elevation = 18.4;
    int frame_width = 240;
    int frame_height = 320;
};

struct LabeledSilhouette {
    StateLabel label;
    segmentation::NormalizedSilhouette silhouette;
};

struct Walk {
    std::vector<GrayImage> frames;
    std::vector<StateLabel> truth;
};

/// Camera azimuth for a viewpoint sector, clockwise from the walking
/// direction: V3 faces the walker's front, V5 its right side, V7 its back.
double viewpoint_azimuth(ViewpointIndex v);

/// Dark figure (intensity ~40) on a bright background (~210), orthographic
/// projection at the requested azimuth and elevation, salt-and-pepper noise applied.
GrayImage render_frame(const RenderSpec& spec, const BodyModel& body, const FrameLayout& layout);

/// Tight canvas around the figure at the default scale.
FrameLayout fitted_layout(const RenderSpec& spec, const BodyModel& body, double pixels_per_unit = 120.0);

/// Rendered frame passed through the segmentation pipeline.
segmentation::NormalizedSilhouette render_silhouette(const RenderSpec& spec, const BodyModel& body);

/// 64 classes x n_per_class silhouettes, jitter uniform in +-22.5 degrees.
std::vector<LabeledSilhouette> generate_dataset(int n_per_class, double noise, std::uint64_t seed,
                                                const BodyModel& body = {}, double elevation = 18.4);

/// Ground-truth state schedule of a walk.
std::vector<StateLabel> walk_schedule(const WalkSpec& spec);

/// Raw frames and ground truth for a walk.
Walk generate_walk(const WalkSpec& spec, const BodyModel& body = {});

/// Segmented silhouettes of a walk's frames.
std::vector<segmentation::NormalizedSilhouette> walk_silhouettes(const Walk& walk,
                                                                 const segmentation::SegmentationParams& params = {});

/// Fan a base seed out to a named sub-stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

}  // namespace gaitdcs::synthgait
