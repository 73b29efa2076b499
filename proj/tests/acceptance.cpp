// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "bank_support.hpp"
#include "gaitdcs/dcs.hpp"
#include "gaitdcs/evaluation.hpp"
#include "gaitdcs/geometry.hpp"
#include "gaitdcs/hog.hpp"
#include "gaitdcs/synthgait.hpp"
#include "gaitdcs/trajectory.hpp"
#include "test_support.hpp"

using namespace gaitdcs;

namespace {

constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void hog_dimension() {
    std::mt19937_64 rng(synthgait::derive_seed(kSeed, "hog"));
    std::vector<segmentation::NormalizedSilhouette> inputs;
    for (int i = 0; i < 100; ++i) inputs.push_back(testing::random_silhouette(rng, 0.05 + 0.005 * i));
    for (const auto& d : synthgait::generate_dataset(2, 0.05, kSeed)) inputs.push_back(d.silhouette);
    inputs.push_back(segmentation::NormalizedSilhouette{});

    bool all_exact = true;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& s : inputs) all_exact &= hog::extract(s).size() == 32292;
    const double ms = 1000.0 * seconds_since(t0) / inputs.size();
    report(1, "HOG dimension", all_exact && ms < 10.0,
           fmt("%zu silhouettes, all 32292-dimensional: %s, %.2f ms/frame (limit 10)", inputs.size(),
               all_exact ? "yes" : "no", ms));
}

void ecoc_structure() {
    std::vector<StateLabel> four;
    for (int i = 0; i < 4; ++i) four.push_back(StateLabel::from_index(i));
    const auto states = all_states();
    const auto n4 = ecoc::build_ovo_coding(four).columns();
    const auto n64 = ecoc::build_ovo_coding(states).columns();
    report(2, "ECOC structure", n4 == 6 && n64 == 2016, fmt("K=4 -> %zu columns, K=64 -> %zu columns", n4, n64));
}

void decoding_oracle() {
    std::mt19937_64 rng(synthgait::derive_seed(kSeed, "decode"));
    std::normal_distribution<float> n(0.0f, 1.0f);
    int agree = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const int k = 2 + static_cast<int>(rng() % 15);
        const std::size_t dim = 1 + rng() % 12;
        std::vector<StateLabel> labels;
        for (int i = 0; i < k; ++i) labels.push_back(StateLabel::from_index(i));
        const auto model = testing::random_ecoc(rng, labels, dim);
        std::vector<float> x(dim);
        for (auto& v : x) v = n(rng);

        std::size_t best = 0;
        double best_loss = 0;
        for (int r = 0; r < k; ++r) {
            double loss = 0;
            for (std::size_t c = 0; c < model.learners.size(); ++c) {
                double f = model.learners[c].bias;
                for (std::size_t d = 0; d < dim; ++d) f += double(model.learners[c].weights[d]) * x[d];
                const int m = model.coding.at(r, c);
                loss += m == 0 ? 0.5 : std::max(0.0, 1.0 - m * f) / 2.0;
            }
            if (r == 0 || loss < best_loss) best = r, best_loss = loss;
        }
        agree += ecoc::decode(model, x).row == best;
    }
    report(3, "Decoding oracle", agree == trials, fmt("%d / %d argmin agreements", agree, trials));
}

void homography_recovery() {
    using namespace geometry;
    std::mt19937_64 rng(synthgait::derive_seed(kSeed, "homography"));
    std::uniform_real_distribution<double> u(0, 640), v(0, 480), a(-0.3, 0.3), t(-50, 50), p(-4e-4, 4e-4);
    double worst = 0;
    int done = 0;
    while (done < 1000) {
        Eigen::Matrix3d h0;
        h0 << 1 + a(rng), a(rng), t(rng), a(rng), 1 + a(rng), t(rng), p(rng), p(rng), 1;
        Quad src, dst;
        for (auto& q : src) q = {u(rng), v(rng)};
        if (!is_generic_quad(src)) continue;
        for (int i = 0; i < 4; ++i) {
            const Eigen::Vector3d w = h0 * Eigen::Vector3d(src[i].x, src[i].y, 1);
            dst[i] = {w.x() / w.z(), w.y() / w.z()};
        }
        if (!is_generic_quad(dst)) continue;
        const auto h = estimate_homography(src, dst);
        worst = std::max(worst, (h.matrix() - HomographyMatrix::canonical(h0)).cwiseAbs().maxCoeff());
        ++done;
    }

    const int w = 240, hgt = 320;
    GrayImage img(w, hgt);
    for (int y = 0; y < hgt; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = static_cast<std::uint8_t>(std::lround(127.5 + 60 * std::sin(x / 19.0) + 60 * std::cos(y / 29.0)));
    const auto preset = vertical_plane_preset(18.4, w, hgt, 400);
    const auto back = warp_image(warp_image(img, preset.matrix, w, hgt), preset.matrix.inverse(), w, hgt);
    double sum = 0;
    int n = 0;
    for (int y = 2; y < hgt - 2; ++y)
        for (int x = 2; x < w - 2; ++x) {
            const auto q = apply_homography(preset.matrix, {double(x), double(y)});
            if (q.x < 2 || q.y < 2 || q.x > w - 3 || q.y > hgt - 3) continue;
            sum += std::abs(int(back.at(x, y)) - int(img.at(x, y)));
            ++n;
        }
    const double mean = n ? sum / n : 1e9;
    report(4, "Homography recovery", worst < 1e-8 && mean < 2.0,
           fmt("worst entry error %.2e over 1000 quads (limit 1e-8); warp round trip %.3f levels over %d px (limit 2)",
               worst, done, mean, n));
}

void transition_structure() {
    using dcs::successors;
    bool ok = true;
    std::array<int, kStateCount> pred{};
    for (const auto& s : all_states()) {
        const auto next = successors(s);
        ok &= next == dcs::classes_for(s.pose, s.viewpoint);
        ok &= std::set<StateLabel>(next.begin(), next.end()).size() == 4;
        for (const auto& t : next) ++pred[t.index()];
    }
    for (int c : pred) ok &= c == 4;

    bool connected = true;
    for (const auto& s : all_states()) {
        std::vector<bool> seen(kStateCount, false);
        std::queue<StateLabel> q;
        q.push(s);
        seen[s.index()] = true;
        int reached = 1;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (const auto& t : successors(u))
                if (!seen[t.index()]) seen[t.index()] = true, ++reached, q.push(t);
        }
        connected &= reached == kStateCount;
    }
    const auto ex = dcs::classes_for(PoseIndex(4), ViewpointIndex(5));
    const std::array<StateLabel, 4> expect{StateLabel::of(4, 5), StateLabel::of(5, 5), StateLabel::of(5, 4),
                                           StateLabel::of(5, 6)};
    const bool example = ex == expect;
    report(5, "Transition structure", ok && connected && example,
           fmt("4 successors and 4 predecessors everywhere: %s; strongly connected: %s; (P4,V5) set: %s", ok ? "yes" : "no",
               connected ? "yes" : "no", example ? "matches" : "differs"));
}

void dcs_admissibility() {
    std::mt19937_64 rng(synthgait::derive_seed(kSeed, "adversarial"));
    const std::size_t dim = 8;
    const auto bank = testing::random_bank(rng, dim);
    const auto frames = testing::random_features(rng, 100000, dim);
    const dcs::DcsConfig cfg;
    const auto out = dcs::run_dcs(frames, bank, cfg);
    std::size_t violations = 0, c64_jumps = 0;
    for (std::size_t i = cfg.q; i < out.size(); ++i) violations += !dcs::is_admissible(out[i - 1], out[i]);
    // The adversarial decoder is not trivially admissible on its own.
    const auto mono = dcs::run_monolithic(std::span(frames).first(2000), bank.c64);
    for (std::size_t i = 1; i < mono.size(); ++i) c64_jumps += !dcs::is_admissible(mono[i - 1], mono[i]);
    report(6, "DCS admissibility", violations == 0 && out.size() == frames.size(),
           fmt("%zu violations in %zu frames (the same decoder without DCS: %zu in 2000)", violations, out.size(),
               c64_jumps));
}

std::size_t non_adjacent(const evaluation::ConfusionMatrix8& m) {
    std::size_t far = 0;
    for (int g = 1; g <= 8; ++g)
        for (int p = 1; p <= 8; ++p)
            if (g != p && !evaluation::is_transitional(g, p)) far += m.counts[g - 1][p - 1];
    return far;
}

void print_indented(const char* title, const std::string& text) {
    std::printf("      %s\n", title);
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        std::printf("        %s\n", text.substr(start, end - start).c_str());
        if (end == std::string::npos) break;
        start = end + 1;
    }
}

void end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto corpus = synthgait::generate_dataset(16, 0.05, synthgait::derive_seed(kSeed, "corpus"));
    std::vector<hog::HogVector> xs;
    std::vector<StateLabel> ys;
    for (const auto& d : corpus) {
        xs.push_back(hog::extract(d.silhouette));
        ys.push_back(d.label);
    }
    ecoc::TrainConfig tc;
    tc.seed = synthgait::derive_seed(kSeed, "train");
    const auto bank = dcs::train_bank(xs, ys, tc);
    const double train_s = seconds_since(t0);

    synthgait::WalkSpec ws;
    ws.path_kind = synthgait::PathKind::Figure8;
    ws.cycles = 3;
    ws.frames_per_pose = 3;
    ws.seed = synthgait::derive_seed(kSeed, "walk");
    const auto walk = synthgait::generate_walk(ws);
    std::vector<hog::HogVector> frames;
    for (const auto& s : synthgait::walk_silhouettes(walk)) frames.push_back(hog::extract(s));
    const auto predicted = dcs::run_dcs(frames, bank, {});
    const double pipeline_s = seconds_since(t0);

    const auto mono = dcs::run_monolithic(frames, bank.c64);

    const evaluation::LabeledSequence seq{walk.truth, predicted};
    const auto r = evaluation::compute_errors(seq);
    const auto far = non_adjacent(evaluation::confusion(seq));
    const auto rm = evaluation::compute_errors({walk.truth, mono});
    const auto far_mono = non_adjacent(evaluation::confusion({walk.truth, mono}));

    std::printf("      corpus %zu silhouettes, walk %zu frames, training %.1f s, full pipeline %.1f s\n", xs.size(),
                frames.size(), train_s, pipeline_s);
    print_indented("DCS", evaluation::format_report(r));
    print_indented("C64 on every frame", evaluation::format_report(rm));

    report(7, "Error confinement", frames.size() >= 800 && far == 0,
           fmt("%zu viewpoint misclassifications, %zu not adjacent to ground truth (C64 on every frame: %zu of %zu)",
               r.view_misclassified, far, far_mono, rm.view_misclassified));
    report(8, "Synthetic end-to-end", r.e_view_no_te <= 2.0 && r.e_pose_no_te <= 5.0 && pipeline_s < 600,
           fmt("e_view no TE %.2f%% (limit 2), e_pose no TE %.2f%% (limit 5), %.1f s (limit 600)", r.e_view_no_te,
               r.e_pose_no_te, pipeline_s));
    report(9, "Dynamic vs monolithic", r.e_pose_with_te < rm.e_pose_with_te,
           fmt("e_pose with TE: DCS %.2f%% vs C64 on every frame %.2f%%", r.e_pose_with_te, rm.e_pose_with_te));
}

std::vector<StateLabel> turning_gait(int changes, int turn, int turn_every, int start_view) {
    std::vector<StateLabel> out{StateLabel::of(1, start_view)};
    for (int i = 1; i <= changes; ++i) {
        auto v = out.back().viewpoint;
        if (turn != 0 && i % turn_every == 0) v = turn > 0 ? v.next() : v.prev();
        out.push_back({out.back().pose.next(), v});
    }
    return out;
}

void trajectory_geometry() {
    using trajectory::PathPoint;
    auto cross = [](PathPoint o, PathPoint a, PathPoint b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    const auto octagon = trajectory::estimate_trajectory(turning_gait(8, -1, 1, 1));
    const double closure = std::hypot(octagon.points.back().x, octagon.points.back().y);

    const auto line = trajectory::estimate_trajectory(turning_gait(40, 0, 1, 3));
    double off_line = 0;
    for (const auto& p : line.points) off_line = std::max(off_line, std::abs(cross({0, 0}, line.points.back(), p)) / 40.0);

    // Circle walk: one left turn per gait cycle, two full loops.
    const auto circle = trajectory::estimate_trajectory(turning_gait(128, +1, 8, 1));
    bool convex = true, angles = true;
    std::vector<PathPoint> corners;
    for (std::size_t i = 1; i < circle.points.size(); ++i) {
        const int d = (circle.headings[i].steps() - circle.headings[i - 1].steps() + 8) % 8;
        angles &= d == 0 || d == 7;
    }
    for (std::size_t i = 2; i <= 64; ++i) convex &= cross(circle.points[i - 2], circle.points[i - 1], circle.points[i]) >= -1e-9;
    const double circle_closure = std::hypot(circle.points[64].x, circle.points[64].y);
    report(10, "Trajectory geometry", closure < 1e-9 && off_line < 1e-9 && convex && angles && circle_closure < 1e-9,
           fmt("octagon closure %.1e, straight-walk deviation %.1e, circle closure %.1e, convex: %s, all turns 45 deg: %s",
               closure, off_line, circle_closure, convex ? "yes" : "no", angles ? "yes" : "no"));
}

void metric_formulas() {
    std::vector<StateLabel> gt(10, StateLabel::of(1, 2));
    auto pred = gt;
    pred[1].viewpoint = ViewpointIndex(3);
    pred[4].viewpoint = ViewpointIndex(1);
    pred[6].viewpoint = ViewpointIndex(3);
    pred[9].viewpoint = ViewpointIndex(6);
    const auto r = evaluation::compute_errors({gt, pred});
    report(11, "Metric formulas", r.e_view_with_te == 40.0 && r.e_view_no_te == 10.0,
           fmt("4 misclassified, %zu transitional -> with TE %.1f%%, no TE %.1f%%", r.view_transitional,
               r.e_view_with_te, r.e_view_no_te));
}

}  // namespace

int main() {
    try {
        hog_dimension();
        ecoc_structure();
        decoding_oracle();
        homography_recovery();
        transition_structure();
        dcs_admissibility();
        end_to_end();
        trajectory_geometry();
        metric_formulas();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 3;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
