#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "gaitdcs/state.hpp"

namespace gaitdcs::trajectory {

/// Walking direction on the ground plane, in 45-degree steps. Heading 0 is +y
/// (north); positive angles turn clockwise.
class Orientation {
public:
    constexpr Orientation() = default;
    static constexpr Orientation from_steps(int steps) { return Orientation(((steps % 8) + 8) % 8); }
    static Orientation from_degrees(double deg);

    constexpr int steps() const { return steps_; }
    constexpr double degrees() const { return 45.0 * steps_; }
    constexpr Orientation rotated(int steps) const { return from_steps(steps_ + steps); }
    /// Unit step along the heading: (sin h, cos h).
    std::array<double, 2> direction() const;

    constexpr bool operator==(const Orientation&) const = default;

private:
    constexpr explicit Orientation(int s) : steps_(s) {}
    int steps_ = 0;
};

struct PathPoint {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const PathPoint&) const = default;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

enum class Joint : int {
    Head,
    LShoulder, RShoulder,
    LElbow, RElbow,
    LWrist, RWrist,
    LHip, RHip,
    LKnee, RKnee,
    LAnkle, RAnkle,
};
inline constexpr int kJointCount = 13;

std::string_view joint_name(Joint j);

/// 13 joints. Body frame: x to the subject's right, y up, z forward.
/// World frame: (path x, height, path y).
struct Skeleton {
    std::array<Vec3, kJointCount> joints{};

    Vec3& operator[](Joint j) { return joints[static_cast<int>(j)]; }
    const Vec3& operator[](Joint j) const { return joints[static_cast<int>(j)]; }
};

/// Segment lengths of the stick figure (unitless, ~1.75 tall).
struct BodyDims {
    double pelvis_half_width = 0.10;
    double shoulder_half_width = 0.17;
    double thigh = 0.45;
    double shin = 0.45;
    double ankle_height = 0.08;
    double torso = 0.50;  // hip centre to shoulder line
    double head_offset = 0.20;  // shoulder line to head centre
    double upper_arm = 0.30;
    double forearm = 0.27;
};

/// Sagittal joint angles in degrees. Hip/shoulder flexion: positive swings the
/// limb forward. Knee flexion bends the shin backward, elbow flexion bends the
/// forearm forward.
struct JointAngles {
    double r_hip = 0, r_knee = 0, l_hip = 0, l_knee = 0;
    double r_shoulder = 0, r_elbow = 0, l_shoulder = 0, l_elbow = 0;
    double torso_lean = 0;
};

/// Keyframe angles for P1..P8 (index pose - 1). P1: double support with the
/// right foot in front; P5: double support with the left foot in front.
const std::array<JointAngles, kCycleLength>& gait_keyframe_angles();

/// Forward kinematics in the body frame, lowest ankle at ankle height.
Skeleton pose_skeleton(const BodyDims& dims, const JointAngles& angles);

/// Canonical keyframe for a pose (default body dimensions).
Skeleton canonical_keyframe(PoseIndex pose);

enum class Foot { Left, Right };

struct ContactMarker {
    std::size_t index = 0;
    Foot foot = Foot::Right;
};

struct PlacedSkeleton {
    std::size_t index = 0;
    PoseIndex pose;
    Skeleton skeleton;
};

struct TrajectoryResult {
    std::vector<StateLabel> states;
    std::vector<PathPoint> points;        // one per input state
    std::vector<Orientation> headings;    // one per input state
    std::vector<bool> moved;              // one per input state; false at index 0
    std::vector<PlacedSkeleton> skeletons;
    std::vector<ContactMarker> contacts;
};

struct StepResult {
    PathPoint position;
    Orientation heading;
    bool moved = false;
};

Orientation initial_heading(ViewpointIndex v);

/// 0 for the same viewpoint, -45 for a left turn (v + 1), +45 for a right turn (v - 1).
double heading_delta(ViewpointIndex prev, ViewpointIndex cur);

StepResult step_trajectory(StateLabel prev, StateLabel cur, PathPoint position, Orientation heading, double step_len);

Skeleton reconstruct_skeleton(PoseIndex pose, Orientation heading, PathPoint position);

/// Reject: an inadmissible consecutive pair throws InadmissibleTransition.
/// Bridge: such a pair (e.g. at a DCS re-initialization) keeps heading plus
/// viewpoint azimuth constant, which holds along every admissible path under a
/// fixed camera, and steps once if the pose changed.
enum class JumpPolicy { Reject, Bridge };

TrajectoryResult estimate_trajectory(std::span<const StateLabel> states, double step_len = 1.0,
                                     JumpPolicy jumps = JumpPolicy::Reject);

/// Header `frame,pose,viewpoint,x,y,heading,contact`; contact is right, left or empty.
void write_trajectory_csv(std::ostream& out, const TrajectoryResult& r);
/// One JSON object per emitted skeleton.
void write_skeletons_jsonl(std::ostream& out, const TrajectoryResult& r);
/// Path polyline with red (right foot front) and blue (left foot front) discs.
void write_trajectory_svg(std::ostream& out, const TrajectoryResult& r);

/// Points, headings and contacts from a CSV written by write_trajectory_csv.
TrajectoryResult read_trajectory_csv(std::istream& in);

}  // namespace gaitdcs::trajectory
