#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "gaitdcs/error.hpp"

namespace gaitdcs {

inline constexpr int kCycleLength = 8;
inline constexpr int kStateCount = kCycleLength * kCycleLength;

/// 1-based cyclic increment over 1..8: ((i + j - 1) mod 8) + 1.
constexpr int cyc_add(int i, int j) {
    if (i < 1 || i > kCycleLength || j < 0) throw Error(ErrorCode::InvalidArgument, "cyc_add operand out of range");
    return (i + j - 1) % kCycleLength + 1;
}

/// 1-based cyclic decrement over 1..8 with a non-negative remainder.
constexpr int cyc_sub(int i, int j) {
    if (i < 1 || i > kCycleLength || j < 0) throw Error(ErrorCode::InvalidArgument, "cyc_sub operand out of range");
    return ((i - j - 1) % kCycleLength + kCycleLength) % kCycleLength + 1;
}

namespace detail {

template <typename Tag>
class CyclicIndex {
public:
    constexpr CyclicIndex() = default;
    constexpr explicit CyclicIndex(int v) : value_(v) {
        if (v < 1 || v > kCycleLength) throw Error(ErrorCode::InvalidArgument, "index must be in 1..8");
    }
    constexpr int value() const { return value_; }
    constexpr CyclicIndex next(int j = 1) const { return CyclicIndex(cyc_add(value_, j)); }
    constexpr CyclicIndex prev(int j = 1) const { return CyclicIndex(cyc_sub(value_, j)); }
    constexpr auto operator<=>(const CyclicIndex&) const = default;

private:
    int value_ = 1;
};

struct PoseTag;
struct ViewpointTag;

}  // namespace detail

/// Gait sub-step P1..P8.
using PoseIndex = detail::CyclicIndex<detail::PoseTag>;
/// Azimuth sector V1..V8, 45 degrees apart.
using ViewpointIndex = detail::CyclicIndex<detail::ViewpointTag>;

struct StateLabel {
    PoseIndex pose;
    ViewpointIndex viewpoint;

    constexpr auto operator<=>(const StateLabel&) const = default;

    /// Dense 0..63 index, pose-major.
    constexpr int index() const { return (pose.value() - 1) * kCycleLength + (viewpoint.value() - 1); }
    static constexpr StateLabel from_index(int idx) {
        if (idx < 0 || idx >= kStateCount) throw Error(ErrorCode::InvalidArgument, "state index out of range");
        return {PoseIndex(idx / kCycleLength + 1), ViewpointIndex(idx % kCycleLength + 1)};
    }
    static constexpr StateLabel of(int pose, int viewpoint) { return {PoseIndex(pose), ViewpointIndex(viewpoint)}; }

    std::string to_string() const { return "P" + std::to_string(pose.value()) + "V" + std::to_string(viewpoint.value()); }
};

/// All 64 states in index order.
std::array<StateLabel, kStateCount> all_states();

}  // namespace gaitdcs
