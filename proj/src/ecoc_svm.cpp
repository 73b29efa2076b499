#include "gaitdcs/ecoc_svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "binary_io.hpp"

namespace gaitdcs::ecoc {

namespace {

constexpr std::uint16_t kFormatVersion = 1;

// Indices of nonzero entries; HOG vectors of silhouettes are mostly zero away
// from the contour.
std::vector<std::uint32_t> nonzeros(std::span<const float> x) {
    std::vector<std::uint32_t> nz;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0f) nz.push_back(static_cast<std::uint32_t>(i));
    return nz;
}

double sparse_dot(std::span<const float> dense, std::span<const float> x, const std::vector<std::uint32_t>& nz) {
    double acc = 0;
    for (auto i : nz) acc += static_cast<double>(dense[i]) * x[i];
    return acc;
}

void check_signs(std::span<const int> signs) {
    bool pos = false, neg = false;
    for (int s : signs) {
        if (s == 1) pos = true;
        else if (s == -1) neg = true;
        else throw Error(ErrorCode::InvalidArgument, "binary labels must be +1 or -1");
    }
    if (!pos || !neg) throw Error(ErrorCode::SingleClassInput, "binary training needs both signs");
}

}  // namespace

CodingMatrix::CodingMatrix(std::vector<StateLabel> labels, std::size_t columns, std::vector<std::int8_t> entries)
    : labels_(std::move(labels)), columns_(columns), entries_(std::move(entries)) {
    const std::size_t k = labels_.size();
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "coding matrix needs at least two classes");
    if (entries_.size() != k * columns_) throw Error(ErrorCode::DimensionMismatch, "coding matrix size != K x N");
    if (std::set<StateLabel>(labels_.begin(), labels_.end()).size() != k)
        throw Error(ErrorCode::DuplicateLabels, "coding matrix class labels repeat");
    std::set<std::vector<std::int8_t>> seen;
    for (std::size_t n = 0; n < columns_; ++n) {
        int plus = 0, minus = 0;
        std::vector<std::int8_t> col(k);
        for (std::size_t r = 0; r < k; ++r) {
            const int v = at(r, n);
            if (v == 1) ++plus;
            else if (v == -1) ++minus;
            else if (v != 0) throw Error(ErrorCode::FormatError, "coding entries must be -1, 0 or +1");
            col[r] = static_cast<std::int8_t>(v);
        }
        if (plus != 1 || minus != 1) throw Error(ErrorCode::FormatError, "each column needs exactly one +1 and one -1");
        if (!seen.insert(col).second) throw Error(ErrorCode::FormatError, "duplicate coding column");
    }
    for (std::size_t r = 0; r < k; ++r) {
        bool any = false;
        for (std::size_t n = 0; n < columns_ && !any; ++n) any = at(r, n) != 0;
        if (!any) throw Error(ErrorCode::FormatError, "coding matrix row is all zero");
    }
}

double BinaryLearner::decision(std::span<const float> x) const {
    if (x.size() != weights.size()) throw Error(ErrorCode::DimensionMismatch, "feature dimension != learner dimension");
    double acc = bias;
    for (std::size_t i = 0; i < x.size(); ++i) acc += static_cast<double>(weights[i]) * x[i];
    return acc;
}

CodingMatrix build_ovo_coding(std::span<const StateLabel> labels) {
    const std::size_t k = labels.size();
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "one-versus-one coding needs K >= 2");
    if (std::set<StateLabel>(labels.begin(), labels.end()).size() != k)
        throw Error(ErrorCode::DuplicateLabels, "class labels must be distinct");
    const std::size_t n = k * (k - 1) / 2;
    std::vector<std::int8_t> entries(k * n, 0);
    std::size_t col = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j, ++col) {
            entries[i * n + col] = 1;
            entries[j * n + col] = -1;
        }
    }
    return CodingMatrix({labels.begin(), labels.end()}, n, std::move(entries));
}

double decoding_loss(int m, double f) {
    if (m == 0) return 0.5;
    return std::max(0.0, 1.0 - m * f) / 2.0;
}

GramMatrix gram_matrix(std::span<const HogVector> features) {
    GramMatrix g;
    g.n = features.size();
    g.values.assign(g.n * g.n, 0.0);
    std::vector<std::vector<std::uint32_t>> nz(g.n);
    for (std::size_t i = 0; i < g.n; ++i) nz[i] = nonzeros(features[i].values);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = i; j < g.n; ++j) {
            // Iterate the sparser operand.
            const std::size_t a = nz[i].size() <= nz[j].size() ? i : j;
            const std::size_t b = a == i ? j : i;
            const double d = sparse_dot(features[b].values, features[a].values, nz[a]);
            g.values[i * g.n + j] = d;
            g.values[j * g.n + i] = d;
        }
    }
    return g;
}

BinaryTrainResult train_binary(std::span<const HogVector> features, const GramMatrix& gram,
                               std::span<const std::size_t> subset, std::span<const int> signs, const TrainConfig& cfg) {
    if (subset.size() != signs.size()) throw Error(ErrorCode::LengthMismatch, "subset and sign counts differ");
    if (!(cfg.c > 0) || !(cfg.tol > 0) || cfg.max_epochs < 1) throw Error(ErrorCode::InvalidArgument, "bad TrainConfig");
    check_signs(signs);
    const std::size_t n = subset.size();
    const std::size_t dim = features[subset[0]].size();
    for (auto s : subset) {
        if (s >= gram.n) throw Error(ErrorCode::DimensionMismatch, "subset index outside the Gram matrix");
        if (features[s].size() != dim) throw Error(ErrorCode::DimensionMismatch, "training vectors differ in length");
    }

    // Kernel of the bias-augmented problem: x_i . x_j + 1.
    std::vector<double> k(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) k[a * n + b] = gram.at(subset[a], subset[b]) + 1.0;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> margin(n, 0.0);  // sum_j alpha_j y_j K_ij
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(cfg.seed);

    BinaryTrainResult res;
    for (res.epochs = 1; res.epochs <= cfg.max_epochs; ++res.epochs) {
        std::shuffle(order.begin(), order.end(), rng);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();
        for (std::size_t i : order) {
            const double y = signs[i];
            const double grad = y * margin[i] - 1.0;
            double pg = grad;
            if (alpha[i] <= 0.0) pg = std::min(grad, 0.0);
            else if (alpha[i] >= cfg.c) pg = std::max(grad, 0.0);
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (pg == 0.0) continue;
            const double qii = k[i * n + i];
            const double next = std::clamp(alpha[i] - grad / qii, 0.0, cfg.c);
            const double delta = (next - alpha[i]) * y;
            alpha[i] = next;
            if (delta == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) margin[j] += delta * k[i * n + j];
        }
        if (pg_max - pg_min < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    res.epochs = std::min(res.epochs, cfg.max_epochs);

    double obj = 0;
    for (std::size_t i = 0; i < n; ++i) obj += 0.5 * alpha[i] * signs[i] * margin[i] - alpha[i];
    res.dual_objective = obj;

    std::vector<double> w(dim, 0.0);
    double b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        const double coef = alpha[i] * signs[i];
        b += coef;
        const auto& x = features[subset[i]].values;
        for (std::size_t d = 0; d < dim; ++d)
            if (x[d] != 0.0f) w[d] += coef * x[d];
    }
    res.learner.weights.assign(w.begin(), w.end());
    res.learner.bias = static_cast<float>(b);
    return res;
}

BinaryTrainResult train_binary(std::span<const HogVector> features, std::span<const int> signs, const TrainConfig& cfg) {
    if (features.size() != signs.size()) throw Error(ErrorCode::LengthMismatch, "feature and sign counts differ");
    check_signs(signs);
    const GramMatrix gram = gram_matrix(features);
    std::vector<std::size_t> all(features.size());
    std::iota(all.begin(), all.end(), 0);
    return train_binary(features, gram, all, signs, cfg);
}

EcocModel train_ecoc(std::span<const HogVector> features, std::span<const StateLabel> sample_labels,
                     std::span<const StateLabel> classes, const TrainConfig& cfg, const GramMatrix* gram) {
    if (features.size() != sample_labels.size()) throw Error(ErrorCode::LengthMismatch, "features and labels differ in count");
    CodingMatrix coding = build_ovo_coding(classes);
    const std::size_t k = coding.classes();

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t s = 0; s < sample_labels.size(); ++s) {
        for (std::size_t r = 0; r < k; ++r) {
            if (classes[r] == sample_labels[s]) {
                members[r].push_back(s);
                break;
            }
        }
    }
    for (std::size_t r = 0; r < k; ++r)
        if (members[r].empty())
            throw Error(ErrorCode::MissingClassSamples, "no samples for class " + classes[r].to_string());
    const std::size_t dim = features[members[0][0]].size();

    GramMatrix local;
    if (gram == nullptr) {
        local = gram_matrix(features);
        gram = &local;
    } else if (gram->n != features.size()) {
        throw Error(ErrorCode::DimensionMismatch, "Gram matrix does not cover the training set");
    }

    EcocModel model{std::move(coding), {}, dim};
    model.learners.reserve(model.coding.columns());
    std::vector<std::size_t> subset;
    std::vector<int> signs;
    for (std::size_t n = 0; n < model.coding.columns(); ++n) {
        subset.clear();
        signs.clear();
        for (std::size_t r = 0; r < k; ++r) {
            const int m = model.coding.at(r, n);
            if (m == 0) continue;
            for (auto s : members[r]) {
                subset.push_back(s);
                signs.push_back(m);
            }
        }
        TrainConfig col_cfg = cfg;
        col_cfg.seed = cfg.seed * 0x9E3779B97F4A7C15ULL + n;
        model.learners.push_back(train_binary(features, *gram, subset, signs, col_cfg).learner);
    }
    return model;
}

std::vector<double> decision_values(const EcocModel& model, std::span<const float> x) {
    if (x.size() != model.feature_dim) throw Error(ErrorCode::DimensionMismatch, "input dimension != model feature_dim");
    const auto nz = nonzeros(x);
    std::vector<double> f(model.learners.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        const auto& l = model.learners[n];
        if (l.weights.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "learner dimension != feature_dim");
        f[n] = l.bias + sparse_dot(l.weights, x, nz);
    }
    return f;
}

Decoded decode(const EcocModel& model, std::span<const float> x) {
    const auto f = decision_values(model, x);
    const auto& code = model.coding;
    Decoded out{code.labels().front(), 0, std::vector<double>(code.classes(), 0.0)};
    for (std::size_t k = 0; k < code.classes(); ++k) {
        double loss = 0;
        for (std::size_t n = 0; n < code.columns(); ++n) loss += decoding_loss(code.at(k, n), f[n]);
        out.losses[k] = loss;
        if (loss < out.losses[out.row]) out.row = k;
    }
    out.predicted = code.labels()[out.row];
    return out;
}

void write_model(std::ostream& out, const EcocModel& model) {
    const auto& code = model.coding;
    detail::write_magic(out, "ECOC");
    detail::write_le<std::uint16_t>(out, kFormatVersion);
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(code.classes()));
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(code.columns()));
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.feature_dim));
    for (const auto& l : code.labels()) {
        detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(l.pose.value()));
        detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(l.viewpoint.value()));
    }
    for (auto e : code.entries()) detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(e));
    for (const auto& l : model.learners) {
        if (l.weights.size() != model.feature_dim) throw Error(ErrorCode::DimensionMismatch, "learner dimension != feature_dim");
        for (float w : l.weights) detail::write_f32(out, w);
        detail::write_f32(out, l.bias);
    }
}

EcocModel read_model(std::istream& in) {
    detail::expect_magic(in, "ECOC", "model");
    const auto version = detail::read_le<std::uint16_t>(in);
    if (version != kFormatVersion) throw Error(ErrorCode::FormatError, "unsupported model version " + std::to_string(version));
    const auto k = detail::read_le<std::uint32_t>(in);
    const auto n = detail::read_le<std::uint32_t>(in);
    const auto dim = detail::read_le<std::uint32_t>(in);
    if (k < 2 || k > kStateCount) throw Error(ErrorCode::FormatError, "model class count out of range");
    if (n > k * (k - 1) / 2) throw Error(ErrorCode::FormatError, "model learner count out of range");
    std::vector<StateLabel> labels;
    for (std::uint32_t i = 0; i < k; ++i) {
        const int pose = detail::read_le<std::uint8_t>(in);
        const int view = detail::read_le<std::uint8_t>(in);
        if (pose < 1 || pose > 8 || view < 1 || view > 8) throw Error(ErrorCode::FormatError, "label out of range");
        labels.push_back(StateLabel::of(pose, view));
    }
    std::vector<std::int8_t> entries(static_cast<std::size_t>(k) * n);
    for (auto& e : entries) e = static_cast<std::int8_t>(detail::read_le<std::uint8_t>(in));
    EcocModel model{CodingMatrix(std::move(labels), n, std::move(entries)), {}, dim};
    model.learners.resize(n);
    for (auto& l : model.learners) {
        l.weights.resize(dim);
        for (auto& w : l.weights) w = detail::read_f32(in);
        l.bias = detail::read_f32(in);
    }
    return model;
}

void save_model(const std::string& path, const EcocModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
    write_model(out, model);
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

EcocModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    return read_model(in);
}

}  // namespace gaitdcs::ecoc
