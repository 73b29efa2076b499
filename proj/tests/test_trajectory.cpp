#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gaitdcs/dcs.hpp"
#include "gaitdcs/trajectory.hpp"

using namespace gaitdcs;
using namespace gaitdcs::trajectory;

namespace {

// Pose advances every frame; the viewpoint turns by `turn` (+1 left, -1 right)
// at every `turn_every`-th pose change.
std::vector<StateLabel> gait(int changes, ViewpointIndex start, int turn, int turn_every) {
    std::vector<StateLabel> out{{PoseIndex(1), start}};
    for (int i = 1; i <= changes; ++i) {
        auto v = out.back().viewpoint;
        if (turn != 0 && i % turn_every == 0) v = turn > 0 ? v.next() : v.prev();
        out.push_back({out.back().pose.next(), v});
    }
    return out;
}

double cross(PathPoint o, PathPoint a, PathPoint b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

}  // namespace

TEST_CASE("orientation") {
    CHECK(Orientation::from_degrees(0).steps() == 0);
    CHECK(Orientation::from_degrees(-45).degrees() == 315);
    CHECK(Orientation::from_degrees(720).degrees() == 0);
    CHECK_THROWS_AS(Orientation::from_degrees(30), Error);
    const auto d = Orientation::from_degrees(0).direction();
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 1.0);
    const auto e = Orientation::from_degrees(90).direction();
    CHECK(e[0] == 1.0);
    CHECK(e[1] == 0.0);
}

TEST_CASE("heading_delta") {
    CHECK(heading_delta(ViewpointIndex(5), ViewpointIndex(5)) == 0);
    CHECK(heading_delta(ViewpointIndex(5), ViewpointIndex(6)) == -45);
    CHECK(heading_delta(ViewpointIndex(1), ViewpointIndex(8)) == 45);
    CHECK(heading_delta(ViewpointIndex(8), ViewpointIndex(1)) == -45);
    try {
        heading_delta(ViewpointIndex(1), ViewpointIndex(3));
        FAIL("expected InadmissibleViewpointJump");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InadmissibleViewpointJump);
    }
    for (int k = 1; k <= 8; ++k) CHECK(initial_heading(ViewpointIndex(k)).degrees() == (k - 1) * 45.0);
}

TEST_CASE("step_trajectory") {
    const auto s = StateLabel::of(3, 2);
    auto r = step_trajectory(s, s, {1.5, -2}, Orientation::from_degrees(90), 1.0);
    CHECK_FALSE(r.moved);
    CHECK(r.position == PathPoint{1.5, -2});
    CHECK(r.heading.degrees() == 90);

    r = step_trajectory(StateLabel::of(1, 1), StateLabel::of(2, 1), {0, 0}, Orientation{}, 1.0);
    CHECK(r.moved);
    CHECK(r.position.x == doctest::Approx(0));
    CHECK(r.position.y == doctest::Approx(1));

    // Right turn rotates first, then translates along the new heading.
    r = step_trajectory(StateLabel::of(1, 3), StateLabel::of(2, 2), {0, 0}, Orientation{}, 2.0);
    CHECK(r.heading.degrees() == 45);
    CHECK(r.position.x == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.position.y == doctest::Approx(std::sqrt(2.0)));

    try {
        step_trajectory(StateLabel::of(1, 1), StateLabel::of(3, 1), {0, 0}, Orientation{}, 1.0);
        FAIL("expected InadmissibleTransition");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InadmissibleTransition);
    }
    CHECK_THROWS_AS(step_trajectory(s, s, {0, 0}, Orientation{}, 0.0), Error);
}

TEST_CASE("eight right turns close a regular octagon") {
    const auto states = gait(8, ViewpointIndex(1), -1, 1);
    const auto r = estimate_trajectory(states);
    CHECK(std::hypot(r.points.back().x, r.points.back().y) < 1e-9);
    for (std::size_t i = 1; i < r.points.size(); ++i)
        CHECK(std::hypot(r.points[i].x - r.points[i - 1].x, r.points[i].y - r.points[i - 1].y) == doctest::Approx(1.0));
    for (std::size_t i = 2; i < r.points.size(); ++i) CHECK(cross(r.points[i - 2], r.points[i - 1], r.points[i]) < 0);
}

TEST_CASE("constant viewpoint walk is a straight line") {
    for (int n : {1, 3}) {
        const auto states = gait(8 * n, ViewpointIndex(3), 0, 1);
        const auto r = estimate_trajectory(states, 1.0);
        const auto& end = r.points.back();
        CHECK(std::hypot(end.x, end.y) == doctest::Approx(8.0 * n));
        for (const auto& p : r.points) CHECK(std::abs(cross({0, 0}, end, p)) < 1e-9);
    }
}

TEST_CASE("circle walk is a convex polygon with 45 degree corners") {
    const auto states = gait(64, ViewpointIndex(1), +1, 8);
    const auto r = estimate_trajectory(states);
    CHECK(std::hypot(r.points.back().x, r.points.back().y) < 1e-9);

    // Corners are where the heading changes; every change is one left step.
    int corners = 0;
    for (std::size_t i = 1; i < r.headings.size(); ++i) {
        const int diff = (r.headings[i].steps() - r.headings[i - 1].steps() + 8) % 8;
        CHECK((diff == 0 || diff == 7));
        corners += diff == 7;
    }
    CHECK(corners == 8);
    for (std::size_t i = 2; i < r.points.size(); ++i) CHECK(cross(r.points[i - 2], r.points[i - 1], r.points[i]) >= -1e-9);
}

TEST_CASE("single state") {
    const std::vector<StateLabel> one{StateLabel::of(2, 4)};
    const auto r = estimate_trajectory(one);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0] == PathPoint{0, 0});
    CHECK(r.skeletons.size() == 1);
    CHECK(r.contacts.empty());
    try {
        estimate_trajectory(std::span<const StateLabel>{});
        FAIL("expected EmptySequence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySequence);
    }
}

TEST_CASE("trajectory invariants on random admissible sequences") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<StateLabel> states{StateLabel::from_index(static_cast<int>(rng() % 64))};
        for (int i = 0; i < 200; ++i) states.push_back(dcs::successors(states.back())[rng() % 4]);
        const auto r = estimate_trajectory(states);
        CHECK(r.points[0] == PathPoint{0, 0});

        std::size_t changes = 0;
        for (std::size_t i = 1; i < states.size(); ++i) changes += states[i].pose != states[i - 1].pose;
        std::size_t moves = 0;
        for (bool m : r.moved) moves += m;
        CHECK(moves == changes);
        CHECK(r.skeletons.size() == changes + 1);

        for (std::size_t i = 1; i < r.headings.size(); ++i) {
            const int diff = (r.headings[i].steps() - r.headings[i - 1].steps() + 8) % 8;
            CHECK((diff == 0 || diff == 1 || diff == 7));
        }
        for (const auto& c : r.contacts) {
            const int pose = states[c.index].pose.value();
            CHECK((pose == 1 || pose == 5));
            CHECK((c.foot == Foot::Right) == (pose == 1));
        }
        for (std::size_t i = 1; i < r.contacts.size(); ++i) CHECK(r.contacts[i].foot != r.contacts[i - 1].foot);
    }
}

TEST_CASE("equal numbers of left and right turns restore the heading") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> turns;
        const int k = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < k; ++i) turns.push_back(1), turns.push_back(-1);
        std::shuffle(turns.begin(), turns.end(), rng);
        std::vector<StateLabel> states{StateLabel::of(1, 3)};
        for (int t : turns) {
            const auto& s = states.back();
            states.push_back({s.pose.next(), t > 0 ? s.viewpoint.next() : s.viewpoint.prev()});
        }
        const auto r = estimate_trajectory(states);
        CHECK(r.headings.back() == r.headings.front());
    }
}

TEST_CASE("bridged jumps keep the camera-relative heading") {
    const std::vector<StateLabel> jump{StateLabel::of(1, 2), StateLabel::of(2, 2), StateLabel::of(5, 5), StateLabel::of(5, 1)};
    CHECK_THROWS_AS(estimate_trajectory(jump), Error);
    const auto r = estimate_trajectory(jump, 1.0, JumpPolicy::Bridge);
    for (std::size_t i = 0; i < jump.size(); ++i)
        CHECK((r.headings[i].steps() + jump[i].viewpoint.value()) % 8 == (r.headings[0].steps() + 2) % 8);
    CHECK(r.moved[2]);
    CHECK_FALSE(r.moved[3]);
    CHECK(r.points[3] == r.points[2]);

    // On admissible input both policies agree.
    std::mt19937_64 rng(8);
    std::vector<StateLabel> walk{StateLabel::of(3, 3)};
    for (int i = 0; i < 100; ++i) walk.push_back(dcs::successors(walk.back())[rng() % 4]);
    const auto a = estimate_trajectory(walk), b = estimate_trajectory(walk, 1.0, JumpPolicy::Bridge);
    CHECK(a.points == b.points);
    CHECK(a.headings == b.headings);
}

TEST_CASE("skeleton placement") {
    const auto key = canonical_keyframe(PoseIndex(2));
    const auto same = reconstruct_skeleton(PoseIndex(2), Orientation{}, {0, 0});
    for (int j = 0; j < kJointCount; ++j) {
        CHECK(same.joints[j].x == doctest::Approx(key.joints[j].x));
        CHECK(same.joints[j].y == doctest::Approx(key.joints[j].y));
        CHECK(same.joints[j].z == doctest::Approx(key.joints[j].z));
    }

    const auto turned = reconstruct_skeleton(PoseIndex(2), Orientation::from_degrees(180), {0, 0});
    CHECK(turned[Joint::LShoulder].x == doctest::Approx(-same[Joint::LShoulder].x));
    CHECK(turned[Joint::RShoulder].x == doctest::Approx(-same[Joint::RShoulder].x));

    const auto moved = reconstruct_skeleton(PoseIndex(2), Orientation{}, {3, 4});
    CHECK(moved[Joint::Head].x == doctest::Approx(same[Joint::Head].x + 3));
    CHECK(moved[Joint::Head].z == doctest::Approx(same[Joint::Head].z + 4));

    const auto p1 = canonical_keyframe(PoseIndex(1)), p5 = canonical_keyframe(PoseIndex(5));
    CHECK(p1[Joint::RAnkle].z > p1[Joint::LAnkle].z);
    CHECK(p5[Joint::LAnkle].z > p5[Joint::RAnkle].z);

    for (int p = 1; p <= 8; ++p) {
        const auto s = canonical_keyframe(PoseIndex(p));
        CHECK(s[Joint::LHip].x < 0);
        CHECK(s[Joint::RHip].x > 0);
        CHECK(s[Joint::LShoulder].x < 0);
        CHECK(s[Joint::RShoulder].x > 0);
        CHECK(std::min(s[Joint::LAnkle].y, s[Joint::RAnkle].y) == doctest::Approx(BodyDims{}.ankle_height));
        CHECK(s[Joint::Head].y > s[Joint::LShoulder].y);
    }
}

TEST_CASE("output formats") {
    const auto states = gait(16, ViewpointIndex(2), -1, 8);
    const auto r = estimate_trajectory(states);

    std::stringstream csv;
    write_trajectory_csv(csv, r);
    const auto back = read_trajectory_csv(csv);
    REQUIRE(back.points.size() == r.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        CHECK(back.points[i].x == doctest::Approx(r.points[i].x));
        CHECK(back.points[i].y == doctest::Approx(r.points[i].y));
        CHECK(back.headings[i] == r.headings[i]);
        CHECK(back.states[i] == r.states[i]);
    }
    REQUIRE(back.contacts.size() == r.contacts.size());
    for (std::size_t i = 0; i < r.contacts.size(); ++i) CHECK(back.contacts[i].foot == r.contacts[i].foot);

    std::stringstream jsonl;
    write_skeletons_jsonl(jsonl, r);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(jsonl, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j["joints"].size() == 13);
        CHECK(j["joints"].contains("l_ankle"));
        ++lines;
    }
    CHECK(lines == r.skeletons.size());

    std::stringstream svg;
    write_trajectory_svg(svg, r);
    CHECK(svg.str().find("fill=\"red\"") != std::string::npos);
    CHECK(svg.str().find("fill=\"blue\"") != std::string::npos);
}
