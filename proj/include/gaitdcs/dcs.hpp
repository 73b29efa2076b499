#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gaitdcs/ecoc_svm.hpp"
#include "gaitdcs/state.hpp"

namespace gaitdcs::dcs {

/// The four classes recognized by the 4-class classifier anchored at (pose, view):
/// {(P, V), (P+1, V), (P+1, V-1), (P+1, V+1)}, in that order.
std::array<StateLabel, 4> classes_for(PoseIndex pose, ViewpointIndex view);

/// Admissible next states: stay, or advance one pose while keeping the
/// viewpoint or turning by one sector either way. Same set as classes_for.
std::array<StateLabel, 4> successors(StateLabel s);

bool is_admissible(StateLabel from, StateLabel to);

/// One 64-class model for initialization and one 4-class model per state.
struct ClassifierBank {
    ecoc::EcocModel c64;
    std::vector<ecoc::EcocModel> c4;  // 64 entries, index = StateLabel::index()

    const ecoc::EcocModel& c4_for(StateLabel s) const { return c4.at(static_cast<std::size_t>(s.index())); }
    std::size_t feature_dim() const { return c64.feature_dim; }
};

struct DcsConfig {
    int q = 4;
    /// Re-run the 64-class initialization for q frames every `reinit_period`
    /// frames; 0 disables it.
    int reinit_period = 0;
};

/// Frames inside an initialization window use c64; every other frame uses the
/// 4-class model of the previous prediction.
std::vector<StateLabel> run_dcs(std::span<const hog::HogVector> features, const ClassifierBank& bank,
                                const DcsConfig& cfg = {});

/// Baseline: c64 on every frame.
std::vector<StateLabel> run_monolithic(std::span<const hog::HogVector> features, const ecoc::EcocModel& c64);

/// Trains c64 and the 64 four-class models, sharing one Gram matrix.
ClassifierBank train_bank(std::span<const hog::HogVector> features, std::span<const StateLabel> labels,
                          const ecoc::TrainConfig& cfg);

/// Bank directory: c64.ecoc, c4_<pose>_<view>.ecoc and manifest.txt.
void save_bank(const std::string& dir, const ClassifierBank& bank, const DcsConfig& defaults);
ClassifierBank load_bank(const std::string& dir, DcsConfig* defaults = nullptr);

}  // namespace gaitdcs::dcs
