#include "gaitdcs/dcs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace gaitdcs {

std::array<StateLabel, kStateCount> all_states() {
    std::array<StateLabel, kStateCount> out{};
    for (int i = 0; i < kStateCount; ++i) out[i] = StateLabel::from_index(i);
    return out;
}

}  // namespace gaitdcs

namespace gaitdcs::dcs {

std::array<StateLabel, 4> classes_for(PoseIndex pose, ViewpointIndex view) {
    const PoseIndex next = pose.next();
    return {StateLabel{pose, view}, StateLabel{next, view}, StateLabel{next, view.prev()}, StateLabel{next, view.next()}};
}

std::array<StateLabel, 4> successors(StateLabel s) {
    const PoseIndex next = s.pose.next();
    return {s, StateLabel{next, s.viewpoint}, StateLabel{next, s.viewpoint.prev()}, StateLabel{next, s.viewpoint.next()}};
}

bool is_admissible(StateLabel from, StateLabel to) {
    const auto next = successors(from);
    return std::find(next.begin(), next.end(), to) != next.end();
}

std::vector<StateLabel> run_dcs(std::span<const hog::HogVector> features, const ClassifierBank& bank,
                                const DcsConfig& cfg) {
    if (features.empty()) throw Error(ErrorCode::EmptyStream, "no frames to classify");
    if (cfg.q < 1) throw Error(ErrorCode::InvalidArgument, "q must be >= 1");
    if (cfg.reinit_period < 0) throw Error(ErrorCode::InvalidArgument, "reinit_period must be >= 0");
    if (bank.c4.size() != kStateCount) throw Error(ErrorCode::InvalidArgument, "bank must hold 64 four-class models");
    for (const auto& f : features)
        if (f.size() != bank.feature_dim()) throw Error(ErrorCode::DimensionMismatch, "frame feature dim != bank feature dim");

    std::vector<StateLabel> out;
    out.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const bool init = i < static_cast<std::size_t>(cfg.q) ||
                          (cfg.reinit_period > 0 && i % static_cast<std::size_t>(cfg.reinit_period) <
                                                        static_cast<std::size_t>(cfg.q));
        const ecoc::EcocModel& model = init ? bank.c64 : bank.c4_for(out.back());
        out.push_back(ecoc::decode(model, features[i]).predicted);
    }
    return out;
}

std::vector<StateLabel> run_monolithic(std::span<const hog::HogVector> features, const ecoc::EcocModel& c64) {
    std::vector<StateLabel> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(ecoc::decode(c64, f).predicted);
    return out;
}

ClassifierBank train_bank(std::span<const hog::HogVector> features, std::span<const StateLabel> labels,
                          const ecoc::TrainConfig& cfg) {
    const auto gram = ecoc::gram_matrix(features);
    const auto states = all_states();
    ClassifierBank bank{ecoc::train_ecoc(features, labels, states, cfg, &gram), {}};
    bank.c4.reserve(kStateCount);

    // Each 4-class model sees only its own classes' samples; the Gram matrix
    // is indexed by original sample position, so build subsets per model.
    for (const auto& s : states) {
        const auto classes = classes_for(s.pose, s.viewpoint);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (std::find(classes.begin(), classes.end(), labels[i]) != classes.end()) keep.push_back(i);
        std::vector<hog::HogVector> sub_x;
        std::vector<StateLabel> sub_y;
        ecoc::GramMatrix sub_g{keep.size(), std::vector<double>(keep.size() * keep.size())};
        for (std::size_t a = 0; a < keep.size(); ++a) {
            sub_x.push_back(features[keep[a]]);
            sub_y.push_back(labels[keep[a]]);
            for (std::size_t b = 0; b < keep.size(); ++b) sub_g.values[a * keep.size() + b] = gram.at(keep[a], keep[b]);
        }
        ecoc::TrainConfig c4_cfg = cfg;
        c4_cfg.seed = cfg.seed + 1 + static_cast<std::uint64_t>(s.index());
        bank.c4.push_back(ecoc::train_ecoc(sub_x, sub_y, classes, c4_cfg, &sub_g));
    }
    return bank;
}

namespace {

std::string c4_name(StateLabel s) {
    return "c4_" + std::to_string(s.pose.value()) + "_" + std::to_string(s.viewpoint.value()) + ".ecoc";
}

}  // namespace

void save_bank(const std::string& dir, const ClassifierBank& bank, const DcsConfig& defaults) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir + ": " + ec.message());
    if (bank.c4.size() != kStateCount) throw Error(ErrorCode::InvalidArgument, "bank must hold 64 four-class models");
    ecoc::save_model((fs::path(dir) / "c64.ecoc").string(), bank.c64);
    for (const auto& s : all_states()) ecoc::save_model((fs::path(dir) / c4_name(s)).string(), bank.c4_for(s));
    std::ofstream manifest(fs::path(dir) / "manifest.txt");
    if (!manifest) throw Error(ErrorCode::IoFailure, "cannot write manifest in " + dir);
    manifest << "feature_dim=" << bank.feature_dim() << "\nq=" << defaults.q << "\nreinit_period=" << defaults.reinit_period
             << "\n";
}

ClassifierBank load_bank(const std::string& dir, DcsConfig* defaults) {
    namespace fs = std::filesystem;
    std::ifstream manifest(fs::path(dir) / "manifest.txt");
    if (!manifest) throw Error(ErrorCode::IoFailure, "missing manifest.txt in " + dir);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(manifest, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (!kv.contains("feature_dim")) throw Error(ErrorCode::FormatError, "manifest lacks feature_dim");
    const std::size_t dim = std::stoul(kv["feature_dim"]);
    if (defaults != nullptr) {
        if (kv.contains("q")) defaults->q = std::stoi(kv["q"]);
        if (kv.contains("reinit_period")) defaults->reinit_period = std::stoi(kv["reinit_period"]);
    }

    ClassifierBank bank{ecoc::load_model((fs::path(dir) / "c64.ecoc").string()), {}};
    bank.c4.reserve(kStateCount);
    for (const auto& s : all_states()) {
        auto model = ecoc::load_model((fs::path(dir) / c4_name(s)).string());
        const auto expected = classes_for(s.pose, s.viewpoint);
        if (!std::equal(expected.begin(), expected.end(), model.coding.labels().begin(), model.coding.labels().end()))
            throw Error(ErrorCode::FormatError, c4_name(s) + " has the wrong class set");
        bank.c4.push_back(std::move(model));
    }
    if (bank.c64.coding.classes() != kStateCount) throw Error(ErrorCode::FormatError, "c64.ecoc is not a 64-class model");
    for (const auto& m : bank.c4)
        if (m.feature_dim != dim) throw Error(ErrorCode::FormatError, "bank models disagree on feature_dim");
    if (bank.c64.feature_dim != dim) throw Error(ErrorCode::FormatError, "c64 feature_dim disagrees with manifest");
    return bank;
}

}  // namespace gaitdcs::dcs
