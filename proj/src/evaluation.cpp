#include "gaitdcs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace gaitdcs::evaluation {

namespace {

void check_aligned(const LabeledSequence& seq) {
    if (seq.ground_truth.size() != seq.predicted.size())
        throw Error(ErrorCode::LengthMismatch, "ground truth has " + std::to_string(seq.ground_truth.size()) +
                                                   " frames, prediction has " + std::to_string(seq.predicted.size()));
    if (seq.ground_truth.empty()) throw Error(ErrorCode::EmptySequence, "no frames to evaluate");
}

}  // namespace

std::size_t ConfusionMatrix8::total() const {
    std::size_t n = 0;
    for (const auto& row : counts)
        for (auto c : row) n += c;
    return n;
}

std::size_t ConfusionMatrix8::off_diagonal() const {
    std::size_t n = 0;
    for (int r = 0; r < kCycleLength; ++r)
        for (int c = 0; c < kCycleLength; ++c)
            if (r != c) n += counts[r][c];
    return n;
}

bool is_transitional(int gt, int pred) { return pred == cyc_add(gt, 1) || pred == cyc_sub(gt, 1); }

ErrorReport compute_errors(const LabeledSequence& seq) {
    check_aligned(seq);
    ErrorReport r;
    r.frame_count = seq.ground_truth.size();
    for (std::size_t i = 0; i < r.frame_count; ++i) {
        const auto& gt = seq.ground_truth[i];
        const auto& pr = seq.predicted[i];
        if (gt.pose != pr.pose) {
            ++r.pose_misclassified;
            if (is_transitional(gt.pose.value(), pr.pose.value())) ++r.pose_transitional;
        }
        if (gt.viewpoint != pr.viewpoint) {
            ++r.view_misclassified;
            if (is_transitional(gt.viewpoint.value(), pr.viewpoint.value())) ++r.view_transitional;
        }
    }
    const double n = static_cast<double>(r.frame_count);
    auto pct = [n](std::size_t a, std::size_t b) {
        return std::abs(static_cast<double>(a) - static_cast<double>(b)) / n * 100.0;
    };
    r.e_pose_with_te = pct(r.pose_misclassified, 0);
    r.e_pose_no_te = pct(r.pose_misclassified, r.pose_transitional);
    r.e_view_with_te = pct(r.view_misclassified, 0);
    r.e_view_no_te = pct(r.view_misclassified, r.view_transitional);
    return r;
}

ConfusionMatrix8 confusion(const LabeledSequence& seq) {
    check_aligned(seq);
    ConfusionMatrix8 m;
    for (std::size_t i = 0; i < seq.ground_truth.size(); ++i)
        ++m.counts[seq.ground_truth[i].viewpoint.value() - 1][seq.predicted[i].viewpoint.value() - 1];
    return m;
}

nlohmann::json report_json(const ErrorReport& r, const ConfusionMatrix8& m) {
    nlohmann::json j;
    j["frame_count"] = r.frame_count;
    j["e_pose_with_te"] = r.e_pose_with_te;
    j["e_pose_no_te"] = r.e_pose_no_te;
    j["e_view_with_te"] = r.e_view_with_te;
    j["e_view_no_te"] = r.e_view_no_te;
    j["pose_misclassified"] = r.pose_misclassified;
    j["pose_transitional"] = r.pose_transitional;
    j["view_misclassified"] = r.view_misclassified;
    j["view_transitional"] = r.view_transitional;
    j["viewpoint_confusion"] = m.counts;
    return j;
}

std::string format_report(const ErrorReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "frames: %zu\npose error      with TE: %.1f%%  no TE: %.1f%%\nviewpoint error with TE: %.1f%%  no TE: %.1f%%\n",
                  r.frame_count, r.e_pose_with_te, r.e_pose_no_te, r.e_view_with_te, r.e_view_no_te);
    return buf;
}

void write_confusion_svg(std::ostream& out, const ConfusionMatrix8& m) {
    constexpr int cell = 50, margin = 40;
    constexpr int size = margin + cell * kCycleLength + 10;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int r = 0; r < kCycleLength; ++r) {
        std::size_t row_total = 0;
        for (auto c : m.counts[r]) row_total += c;
        for (int c = 0; c < kCycleLength; ++c) {
            const double frac = row_total ? static_cast<double>(m.counts[r][c]) / row_total : 0.0;
            const int shade = static_cast<int>(std::lround(255 * (1.0 - frac)));
            const int x = margin + c * cell, y = margin + r * cell;
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
                << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\" stroke=\"gray\"/>\n";
            out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" font-size=\"11\" text-anchor=\"middle\">" << m.counts[r][c] << "</text>\n";
        }
        out << "<text x=\"" << margin - 6 << "\" y=\"" << margin + r * cell + cell / 2 + 4
            << "\" font-size=\"12\" text-anchor=\"end\">V" << r + 1 << "</text>\n";
        out << "<text x=\"" << margin + r * cell + cell / 2 << "\" y=\"" << margin - 8
            << "\" font-size=\"12\" text-anchor=\"middle\">V" << r + 1 << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<StateLabel> read_state_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("frame,pose,viewpoint", 0) != 0)
        throw Error(ErrorCode::FormatError, "state CSV must start with header frame,pose,viewpoint");
    std::vector<StateLabel> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string frame, pose, view;
        std::getline(ss, frame, ',');
        std::getline(ss, pose, ',');
        std::getline(ss, view, ',');
        try {
            if (std::stoul(frame) != out.size()) throw Error(ErrorCode::FormatError, "frames must be consecutive from 0");
            out.push_back(StateLabel::of(std::stoi(pose), std::stoi(view)));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::FormatError, "bad state CSV row: " + line);
        }
    }
    return out;
}

void write_state_csv(std::ostream& out, std::span<const StateLabel> states) {
    out << "frame,pose,viewpoint\n";
    for (std::size_t i = 0; i < states.size(); ++i)
        out << i << ',' << states[i].pose.value() << ',' << states[i].viewpoint.value() << '\n';
}

}  // namespace gaitdcs::evaluation
