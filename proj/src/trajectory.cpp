#include "gaitdcs/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gaitdcs/dcs.hpp"

namespace gaitdcs::trajectory {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRoot2Half = 0.70710678118654752440;

double rad(double deg) { return deg * kPi / 180.0; }

// Limb hanging from `root` with the given flexion from vertical.
Vec3 swing(const Vec3& root, double length, double flexion_deg) {
    const double a = rad(flexion_deg);
    return {root.x, root.y - length * std::cos(a), root.z + length * std::sin(a)};
}

}  // namespace

std::string_view joint_name(Joint j) {
    static constexpr std::array<std::string_view, kJointCount> names = {
        "head", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow", "l_wrist", "r_wrist",
        "l_hip", "r_hip", "l_knee", "r_knee", "l_ankle", "r_ankle"};
    return names[static_cast<int>(j)];
}

Orientation Orientation::from_degrees(double deg) {
    const double steps = deg / 45.0;
    const double r = std::round(steps);
    if (std::abs(steps - r) > 1e-9) throw Error(ErrorCode::InvalidArgument, "heading must be a multiple of 45 degrees");
    return from_steps(static_cast<int>(r));
}

std::array<double, 2> Orientation::direction() const {
    static constexpr std::array<std::array<double, 2>, 8> unit = {{{0, 1},
                                                                   {kRoot2Half, kRoot2Half},
                                                                   {1, 0},
                                                                   {kRoot2Half, -kRoot2Half},
                                                                   {0, -1},
                                                                   {-kRoot2Half, -kRoot2Half},
                                                                   {-1, 0},
                                                                   {-kRoot2Half, kRoot2Half}}};
    return unit[steps_];
}

const std::array<JointAngles, kCycleLength>& gait_keyframe_angles() {
    // Right-leg cycle; the left leg runs half a cycle behind and each arm
    // swings against its leg.
    static const std::array<JointAngles, kCycleLength> table = [] {
        constexpr std::array<double, 8> hip = {25.0, 17.7, 0.0, -17.7, -25.0, -17.7, 0.0, 17.7};
        constexpr std::array<double, 8> knee = {5.0, 12.0, 8.0, 5.0, 10.0, 40.0, 60.0, 25.0};
        std::array<JointAngles, kCycleLength> t{};
        for (int k = 0; k < 8; ++k) {
            const int o = (k + 4) % 8;
            auto& a = t[k];
            a.r_hip = hip[k];
            a.r_knee = knee[k];
            a.l_hip = hip[o];
            a.l_knee = knee[o];
            a.r_shoulder = -0.8 * hip[k];
            a.l_shoulder = -0.8 * hip[o];
            a.r_elbow = 15.0 + 0.6 * std::max(0.0, a.r_shoulder);
            a.l_elbow = 15.0 + 0.6 * std::max(0.0, a.l_shoulder);
            a.torso_lean = 3.0;
        }
        return t;
    }();
    return table;
}

Skeleton pose_skeleton(const BodyDims& d, const JointAngles& a) {
    Skeleton s;
    const double hip_y = d.thigh + d.shin + d.ankle_height;
    s[Joint::LHip] = {-d.pelvis_half_width, hip_y, 0};
    s[Joint::RHip] = {d.pelvis_half_width, hip_y, 0};
    s[Joint::LKnee] = swing(s[Joint::LHip], d.thigh, a.l_hip);
    s[Joint::RKnee] = swing(s[Joint::RHip], d.thigh, a.r_hip);
    s[Joint::LAnkle] = swing(s[Joint::LKnee], d.shin, a.l_hip - a.l_knee);
    s[Joint::RAnkle] = swing(s[Joint::RKnee], d.shin, a.r_hip - a.r_knee);

    const double lean = rad(a.torso_lean);
    const double shoulder_y = hip_y + d.torso * std::cos(lean);
    const double shoulder_z = d.torso * std::sin(lean);
    s[Joint::LShoulder] = {-d.shoulder_half_width, shoulder_y, shoulder_z};
    s[Joint::RShoulder] = {d.shoulder_half_width, shoulder_y, shoulder_z};
    s[Joint::Head] = {0, shoulder_y + d.head_offset * std::cos(lean), shoulder_z + d.head_offset * std::sin(lean)};
    s[Joint::LElbow] = swing(s[Joint::LShoulder], d.upper_arm, a.l_shoulder);
    s[Joint::RElbow] = swing(s[Joint::RShoulder], d.upper_arm, a.r_shoulder);
    s[Joint::LWrist] = swing(s[Joint::LElbow], d.forearm, a.l_shoulder + a.l_elbow);
    s[Joint::RWrist] = swing(s[Joint::RElbow], d.forearm, a.r_shoulder + a.r_elbow);

    // Ground the figure: the lower ankle sits at ankle height.
    const double lift = d.ankle_height - std::min(s[Joint::LAnkle].y, s[Joint::RAnkle].y);
    for (auto& j : s.joints) j.y += lift;
    return s;
}

Skeleton canonical_keyframe(PoseIndex pose) {
    return pose_skeleton(BodyDims{}, gait_keyframe_angles()[static_cast<std::size_t>(pose.value() - 1)]);
}

Orientation initial_heading(ViewpointIndex v) { return Orientation::from_steps(v.value() - 1); }

double heading_delta(ViewpointIndex prev, ViewpointIndex cur) {
    if (cur == prev) return 0.0;
    if (cur == prev.next()) return -45.0;
    if (cur == prev.prev()) return 45.0;
    throw Error(ErrorCode::InadmissibleViewpointJump,
                "viewpoint V" + std::to_string(prev.value()) + " -> V" + std::to_string(cur.value()));
}

StepResult step_trajectory(StateLabel prev, StateLabel cur, PathPoint position, Orientation heading, double step_len) {
    if (!(step_len > 0)) throw Error(ErrorCode::InvalidArgument, "step_len must be > 0");
    if (!dcs::is_admissible(prev, cur))
        throw Error(ErrorCode::InadmissibleTransition, prev.to_string() + " -> " + cur.to_string());
    if (cur.pose == prev.pose) return {position, heading, false};
    const Orientation next = heading.rotated(static_cast<int>(heading_delta(prev.viewpoint, cur.viewpoint) / 45.0));
    const auto dir = next.direction();
    return {{position.x + step_len * dir[0], position.y + step_len * dir[1]}, next, true};
}

Skeleton reconstruct_skeleton(PoseIndex pose, Orientation heading, PathPoint position) {
    Skeleton s = canonical_keyframe(pose);
    const double h = rad(heading.degrees());
    const double c = std::cos(h), sn = std::sin(h);
    for (auto& j : s.joints) {
        const double wx = j.x * c + j.z * sn;
        const double wz = -j.x * sn + j.z * c;
        j = {position.x + wx, j.y, position.y + wz};
    }
    return s;
}

TrajectoryResult estimate_trajectory(std::span<const StateLabel> states, double step_len, JumpPolicy jumps) {
    if (states.empty()) throw Error(ErrorCode::EmptySequence, "no states to integrate");
    if (!(step_len > 0)) throw Error(ErrorCode::InvalidArgument, "step_len must be > 0");
    TrajectoryResult r;
    r.states.assign(states.begin(), states.end());
    PathPoint pos{0, 0};
    Orientation heading = initial_heading(states[0].viewpoint);

    auto emit = [&](std::size_t i) {
        const PoseIndex pose = states[i].pose;
        r.skeletons.push_back({i, pose, reconstruct_skeleton(pose, heading, pos)});
        if (pose.value() == 1) r.contacts.push_back({i, Foot::Right});
        else if (pose.value() == 5) r.contacts.push_back({i, Foot::Left});
    };

    r.points.push_back(pos);
    r.headings.push_back(heading);
    r.moved.push_back(false);
    emit(0);
    for (std::size_t i = 1; i < states.size(); ++i) {
        StepResult step;
        if (jumps == JumpPolicy::Bridge && !dcs::is_admissible(states[i - 1], states[i])) {
            // A left turn adds one viewpoint step and removes one heading step.
            const int dv = states[i].viewpoint.value() - states[i - 1].viewpoint.value();
            step.heading = heading.rotated(-dv);
            step.moved = states[i].pose != states[i - 1].pose;
            step.position = pos;
            if (step.moved) {
                const auto dir = step.heading.direction();
                step.position = {pos.x + step_len * dir[0], pos.y + step_len * dir[1]};
            }
        } else {
            step = step_trajectory(states[i - 1], states[i], pos, heading, step_len);
        }
        pos = step.position;
        heading = step.heading;
        r.points.push_back(pos);
        r.headings.push_back(heading);
        r.moved.push_back(step.moved);
        if (step.moved) emit(i);
    }
    return r;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryResult& r) {
    out << "frame,pose,viewpoint,x,y,heading,contact\n";
    std::size_t c = 0;
    const auto old = out.precision(12);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        std::string contact;
        while (c < r.contacts.size() && r.contacts[c].index < i) ++c;
        if (c < r.contacts.size() && r.contacts[c].index == i) contact = r.contacts[c].foot == Foot::Right ? "right" : "left";
        out << i << ',' << r.states[i].pose.value() << ',' << r.states[i].viewpoint.value() << ',' << r.points[i].x << ','
            << r.points[i].y << ',' << r.headings[i].degrees() << ',' << contact << '\n';
    }
    out.precision(old);
}

TrajectoryResult read_trajectory_csv(std::istream& in) {
    TrajectoryResult r;
    std::string line;
    if (!std::getline(in, line) || line.rfind("frame,pose,viewpoint,x,y,heading", 0) != 0)
        throw Error(ErrorCode::FormatError, "trajectory CSV header missing");
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string f[7];
        for (int k = 0; k < 7; ++k) std::getline(ss, f[k], ',');
        try {
            const std::size_t frame = std::stoul(f[0]);
            r.states.push_back(StateLabel::of(std::stoi(f[1]), std::stoi(f[2])));
            r.points.push_back({std::stod(f[3]), std::stod(f[4])});
            r.headings.push_back(Orientation::from_degrees(std::stod(f[5])));
            r.moved.push_back(r.points.size() > 1 && !(r.points.back() == r.points[r.points.size() - 2]));
            if (!f[6].empty() && f[6].back() == '\r') f[6].pop_back();
            if (f[6] == "right") r.contacts.push_back({frame, Foot::Right});
            else if (f[6] == "left") r.contacts.push_back({frame, Foot::Left});
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::FormatError, "bad trajectory CSV row: " + line);
        }
    }
    return r;
}

void write_skeletons_jsonl(std::ostream& out, const TrajectoryResult& r) {
    for (const auto& ps : r.skeletons) {
        nlohmann::json j;
        j["frame"] = ps.index;
        j["pose"] = ps.pose.value();
        nlohmann::json joints = nlohmann::json::object();
        for (int k = 0; k < kJointCount; ++k) {
            const auto& p = ps.skeleton.joints[k];
            joints[std::string(joint_name(static_cast<Joint>(k)))] = {p.x, p.y, p.z};
        }
        j["joints"] = std::move(joints);
        out << j.dump() << '\n';
    }
}

void write_trajectory_svg(std::ostream& out, const TrajectoryResult& r) {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    for (const auto& p : r.points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1.0});
    const double size = 600, margin = 30;
    const double scale = (size - 2 * margin) / span;
    // SVG y grows downward; the plot keeps north up.
    auto sx = [&](double x) { return margin + (x - x0) * scale; };
    auto sy = [&](double y) { return size - margin - (y - y0) * scale; };

    out << std::fixed << std::setprecision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
        << size << ' ' << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : r.points) out << sx(p.x) << ',' << sy(p.y) << ' ';
    out << "\"/>\n";
    for (const auto& c : r.contacts) {
        const auto& p = r.points[c.index];
        out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"4\" fill=\""
            << (c.foot == Foot::Right ? "red" : "blue") << "\"/>\n";
    }
    out << "<circle cx=\"" << sx(0) << "\" cy=\"" << sy(0) << "\" r=\"6\" fill=\"none\" stroke=\"green\" stroke-width=\"2\"/>\n";
    out << "</svg>\n";
}

}  // namespace gaitdcs::trajectory
