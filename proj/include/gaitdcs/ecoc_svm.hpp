#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gaitdcs/hog.hpp"
#include "gaitdcs/state.hpp"

namespace gaitdcs::ecoc {

using hog::HogVector;

/// Ternary K x N code over {-1, 0, +1}. Every column has exactly one +1 and
/// one -1 (one-versus-one shape), columns are distinct, no row is all zero.
class CodingMatrix {
public:
    CodingMatrix(std::vector<StateLabel> labels, std::size_t columns, std::vector<std::int8_t> entries);

    std::size_t classes() const { return labels_.size(); }
    std::size_t columns() const { return columns_; }
    int at(std::size_t k, std::size_t n) const { return entries_[k * columns_ + n]; }
    const std::vector<StateLabel>& labels() const { return labels_; }
    const std::vector<std::int8_t>& entries() const { return entries_; }

    bool operator==(const CodingMatrix&) const = default;

private:
    std::vector<StateLabel> labels_;
    std::size_t columns_;
    std::vector<std::int8_t> entries_;
};

struct BinaryLearner {
    std::vector<float> weights;
    float bias = 0.0f;

    /// w . x + b, accumulated in double.
    double decision(std::span<const float> x) const;
    bool operator==(const BinaryLearner&) const = default;
};

struct EcocModel {
    CodingMatrix coding;
    std::vector<BinaryLearner> learners;
    std::size_t feature_dim = 0;

    bool operator==(const EcocModel&) const = default;
};

struct TrainConfig {
    double c = 1.0;
    double tol = 1e-4;
    int max_epochs = 1000;
    std::uint64_t seed = 0;
};

struct BinaryTrainResult {
    BinaryLearner learner;
    double dual_objective = 0.0;
    int epochs = 0;
    bool converged = false;
};

struct Decoded {
    StateLabel predicted;
    std::size_t row = 0;
    std::vector<double> losses;
};

/// Pairwise design: column n enumerates pairs (i, j), i < j, lexicographically.
CodingMatrix build_ovo_coding(std::span<const StateLabel> labels);

/// Loss-based decoding term: max(0, 1 - m f) / 2 for m != 0, and 1/2 for m = 0.
double decoding_loss(int m, double f);

/// Dense symmetric Gram matrix x_i . x_j, row-major n x n.
struct GramMatrix {
    std::size_t n = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

GramMatrix gram_matrix(std::span<const HogVector> features);

/// L1-hinge linear SVM with a regularized bias, solved by dual coordinate
/// descent. Inner products come from a cached Gram matrix, so each coordinate
/// step costs O(n) instead of O(feature_dim).
BinaryTrainResult train_binary(std::span<const HogVector> features, std::span<const int> signs, const TrainConfig& cfg);

/// Variant over a subset of a precomputed Gram matrix (indices into `features`).
BinaryTrainResult train_binary(std::span<const HogVector> features, const GramMatrix& gram,
                               std::span<const std::size_t> subset, std::span<const int> signs, const TrainConfig& cfg);

/// One learner per coding column, trained on the samples of the column's two
/// nonzero classes. `gram`, when given, must cover `features`.
EcocModel train_ecoc(std::span<const HogVector> features, std::span<const StateLabel> sample_labels,
                     std::span<const StateLabel> classes, const TrainConfig& cfg, const GramMatrix* gram = nullptr);

std::vector<double> decision_values(const EcocModel& model, std::span<const float> x);

Decoded decode(const EcocModel& model, std::span<const float> x);
inline Decoded decode(const EcocModel& model, const HogVector& x) { return decode(model, std::span<const float>(x.values)); }

void write_model(std::ostream& out, const EcocModel& model);
EcocModel read_model(std::istream& in);
void save_model(const std::string& path, const EcocModel& model);
EcocModel load_model(const std::string& path);

}  // namespace gaitdcs::ecoc
