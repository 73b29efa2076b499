#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitdcs/state.hpp"

namespace gaitdcs::evaluation {

struct LabeledSequence {
    std::span<const StateLabel> ground_truth;
    std::span<const StateLabel> predicted;
};

/// Percentages in [0, 100].
struct ErrorReport {
    double e_pose_with_te = 0;
    double e_pose_no_te = 0;
    double e_view_with_te = 0;
    double e_view_no_te = 0;
    std::size_t frame_count = 0;
    std::size_t pose_misclassified = 0;
    std::size_t pose_transitional = 0;
    std::size_t view_misclassified = 0;
    std::size_t view_transitional = 0;
};

/// counts[gt - 1][pred - 1] over viewpoints.
struct ConfusionMatrix8 {
    std::array<std::array<std::size_t, kCycleLength>, kCycleLength> counts{};

    std::size_t total() const;
    std::size_t off_diagonal() const;
};

/// A wrong prediction one step away (cyclically) from the truth.
bool is_transitional(int gt, int pred);

ErrorReport compute_errors(const LabeledSequence& seq);

ConfusionMatrix8 confusion(const LabeledSequence& seq);

nlohmann::json report_json(const ErrorReport& report, const ConfusionMatrix8& matrix);

/// Human-readable summary with one decimal place.
std::string format_report(const ErrorReport& report);

void write_confusion_svg(std::ostream& out, const ConfusionMatrix8& m);

/// CSV with header `frame,pose,viewpoint` (extra columns ignored).
std::vector<StateLabel> read_state_csv(std::istream& in);
void write_state_csv(std::ostream& out, std::span<const StateLabel> states);

}  // namespace gaitdcs::evaluation
