#pragma once

#include <random>
#include <vector>

#include "gaitdcs/dcs.hpp"

namespace testing {

// Classifier bank with Gaussian random weights: an adversarial decoder whose
// predictions carry no information about the input.
inline gaitdcs::ecoc::EcocModel random_ecoc(std::mt19937_64& rng, std::span<const gaitdcs::StateLabel> classes,
                                            std::size_t dim) {
    std::normal_distribution<float> n(0.0f, 1.0f);
    gaitdcs::ecoc::EcocModel m{gaitdcs::ecoc::build_ovo_coding(classes), {}, dim};
    for (std::size_t c = 0; c < m.coding.columns(); ++c) {
        gaitdcs::ecoc::BinaryLearner l{std::vector<float>(dim), n(rng)};
        for (auto& w : l.weights) w = n(rng);
        m.learners.push_back(std::move(l));
    }
    return m;
}

inline gaitdcs::dcs::ClassifierBank random_bank(std::mt19937_64& rng, std::size_t dim) {
    const auto states = gaitdcs::all_states();
    gaitdcs::dcs::ClassifierBank bank{random_ecoc(rng, states, dim), {}};
    for (const auto& s : states) {
        const auto classes = gaitdcs::dcs::classes_for(s.pose, s.viewpoint);
        bank.c4.push_back(random_ecoc(rng, classes, dim));
    }
    return bank;
}

inline std::vector<gaitdcs::hog::HogVector> random_features(std::mt19937_64& rng, std::size_t count, std::size_t dim) {
    std::normal_distribution<float> n(0.0f, 1.0f);
    std::vector<gaitdcs::hog::HogVector> out(count);
    for (auto& f : out) {
        f.values.resize(dim);
        for (auto& v : f.values) v = n(rng);
    }
    return out;
}

}  // namespace testing
