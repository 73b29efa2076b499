// gaitdcs: synthesize data, train the classifier bank, track walks and score them.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaitdcs/dcs.hpp"
#include "gaitdcs/evaluation.hpp"
#include "gaitdcs/geometry.hpp"
#include "gaitdcs/hog.hpp"
#include "gaitdcs/image_io.hpp"
#include "gaitdcs/segmentation.hpp"
#include "gaitdcs/synthgait.hpp"
#include "gaitdcs/trajectory.hpp"

namespace fs = std::filesystem;
using namespace gaitdcs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Elevations of the presets written by `synth`.
constexpr double kPresetElevations[] = {18.4, 33.7, 45.0, 53.1};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SegmentationOptions {
    segmentation::SegmentationParams params;

    void add_to(CLI::App* app) {
        app->add_option("--threshold", params.threshold, "Binarization threshold")->capture_default_str()->check(CLI::Range(0, 255));
        app->add_option("--sigma", params.sigma, "Gaussian denoising sigma, <= 0 to skip")->capture_default_str();
        app->add_option("--min-pixels", params.min_pixels, "Blobs smaller than this are dropped")->capture_default_str()->check(CLI::NonNegativeNumber);
        app->add_option("--dark-foreground", params.foreground_is_dark, "Walker darker than the background (true/false)")->capture_default_str();
    }
};

struct SynthOptions {
    std::string out;
    std::uint64_t seed = 1;
    int per_class = 16;
    double noise = 0.05;
    double elevation = 18.4;
    std::string walk = "figure8";
    int cycles = 3;
    int frames_per_pose = 3;
    double walk_jitter = 10.0;
    int start_view = 1;
    int frame_width = 240;
    int frame_height = 320;
    double focal = 400.0;
};

struct TrainOptions {
    std::string dataset;
    std::string model;
    std::uint64_t seed = 1;
    ecoc::TrainConfig train;
    dcs::DcsConfig dcs;
    SegmentationOptions seg;
};

struct TrackOptions {
    std::string frames;
    std::string model;
    std::string out;
    std::string presets;
    double elevation = 0.0;
    double focal = 400.0;
    int q = -1;
    int reinit = -1;
    double step_len = 1.0;
    SegmentationOptions seg;
};

struct EvalOptions {
    std::string truth;
    std::string pred;
    std::string out;
};

struct PlotOptions {
    std::string trajectory;
    std::string out;
};

// ---------------------------------------------------------------------------
// File helpers

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + p.string());
    return f;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot read " + p.string());
    return f;
}

void make_dirs(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + p.string() + ": " + ec.message());
}

std::vector<fs::path> sorted_files(const fs::path& dir, std::initializer_list<const char*> extensions) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IoFailure, dir.string() + " is not a directory");
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string zero_pad(std::size_t n, int width) {
    std::string s = std::to_string(n);
    return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

// Already-normalized binary silhouettes are used as they are; anything else
// goes through segmentation.
segmentation::NormalizedSilhouette load_silhouette(const fs::path& p, const segmentation::SegmentationParams& params) {
    const GrayImage img = read_pnm(p.string());
    const bool binary = std::all_of(img.pixels.begin(), img.pixels.end(), [](auto v) { return v == 0 || v == 255; });
    if (binary && img.width == segmentation::kSilhouetteWidth && img.height == segmentation::kSilhouetteHeight) {
        BinaryMask m(img.width, img.height);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) m.bits[i] = img.pixels[i] != 0;
        return segmentation::NormalizedSilhouette(std::move(m));
    }
    return segmentation::segment_frame(img, params);
}

Error with_context(const Error& e, const std::string& context) { return Error(e.code(), context + ": " + e.what()); }

// ---------------------------------------------------------------------------
// Commands

int cmd_synth(const SynthOptions& o) {
    const fs::path out(o.out);
    const auto kind_name = o.walk;
    std::optional<synthgait::PathKind> kind;
    if (kind_name != "none") kind = synthgait::parse_path_kind(kind_name);

    const auto corpus = synthgait::generate_dataset(o.per_class, o.noise, synthgait::derive_seed(o.seed, "corpus"), {},
                                                    o.elevation);
    std::map<int, std::size_t> seq;
    for (const auto& d : corpus) {
        const fs::path dir = out / "dataset" / ("P" + std::to_string(d.label.pose.value()) + "_V" +
                                               std::to_string(d.label.viewpoint.value()));
        make_dirs(dir);
        write_mask_pgm((dir / (zero_pad(seq[d.label.index()]++, 4) + ".pgm")).string(), d.silhouette.mask());
    }
    std::printf("dataset: %zu silhouettes in %s\n", corpus.size(), (out / "dataset").string().c_str());

    if (kind) {
        synthgait::WalkSpec ws;
        ws.path_kind = *kind;
        ws.cycles = o.cycles;
        ws.frames_per_pose = o.frames_per_pose;
        ws.walk_jitter = o.walk_jitter;
        ws.noise_level = o.noise;
        ws.elevation = o.elevation;
        ws.start_viewpoint = ViewpointIndex(o.start_view);
        ws.frame_width = o.frame_width;
        ws.frame_height = o.frame_height;
        ws.seed = synthgait::derive_seed(o.seed, "walk");
        const auto walk = synthgait::generate_walk(ws);
        const fs::path frames = out / "walk" / "frames";
        make_dirs(frames);
        for (std::size_t i = 0; i < walk.frames.size(); ++i)
            write_pgm((frames / ("frame_" + zero_pad(i, 6) + ".pgm")).string(), walk.frames[i]);
        auto truth = open_out(out / "walk" / "truth.csv");
        evaluation::write_state_csv(truth, walk.truth);
        std::printf("walk: %zu %s frames in %s\n", walk.frames.size(), kind_name.c_str(), frames.string().c_str());
    }

    std::vector<geometry::ElevationPreset> presets;
    for (double phi : kPresetElevations)
        presets.push_back(geometry::vertical_plane_preset(phi, o.frame_width, o.frame_height, o.focal));
    auto pf = open_out(out / "presets.txt");
    pf << "# phi  source quad (4 x,y)  |  target quad (4 x,y); frame " << o.frame_width << "x" << o.frame_height
       << ", focal " << o.focal << " px\n";
    geometry::write_presets(pf, presets);
    return kExitOk;
}

int cmd_train(const TrainOptions& o) {
    static const std::regex class_dir(R"(P([1-8])_V([1-8]))");
    const fs::path root(o.dataset);
    if (!fs::is_directory(root)) throw Error(ErrorCode::IoFailure, o.dataset + " is not a directory");

    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());

    std::vector<hog::HogVector> xs;
    std::vector<StateLabel> ys;
    for (const auto& dir : dirs) {
        std::smatch m;
        const std::string name = dir.filename().string();
        if (!std::regex_match(name, m, class_dir)) continue;
        const auto label = StateLabel::of(std::stoi(m[1]), std::stoi(m[2]));
        for (const auto& f : sorted_files(dir, {".pgm", ".ppm"})) {
            try {
                xs.push_back(hog::extract(load_silhouette(f, o.seg.params)));
            } catch (const Error& e) {
                throw with_context(e, f.string());
            }
            ys.push_back(label);
        }
    }
    if (xs.empty()) throw Error(ErrorCode::EmptyStream, "no P<i>_V<j>/*.pgm samples under " + o.dataset);

    auto cfg = o.train;
    cfg.seed = synthgait::derive_seed(o.seed, "train");
    const auto bank = dcs::train_bank(xs, ys, cfg);
    make_dirs(o.model);
    dcs::save_bank(o.model, bank, o.dcs);
    std::printf("trained 1 + %zu models on %zu samples into %s\n", bank.c4.size(), xs.size(), o.model.c_str());
    return kExitOk;
}

std::optional<geometry::ElevationPreset> choose_preset(const TrackOptions& o, int width, int height) {
    if (o.presets.empty()) {
        // Range checks only; without a preset file one is built for the exact elevation.
        geometry::preset_for_elevation(o.elevation, {});
        if (o.elevation < 5.0) return std::nullopt;
        return geometry::vertical_plane_preset(o.elevation, width, height, o.focal);
    }
    const auto presets = geometry::load_presets(o.presets);
    auto p = geometry::preset_for_elevation(o.elevation, presets);
    if (!p && o.elevation >= 5.0)
        throw Error(ErrorCode::UncorrectableElevation, "no preset within 5 degrees of " + std::to_string(o.elevation));
    return p;
}

int cmd_track(const TrackOptions& o) {
    const auto files = sorted_files(o.frames, {".pgm", ".ppm"});
    if (files.empty()) throw Error(ErrorCode::EmptyStream, "no .pgm/.ppm frames in " + o.frames);

    dcs::DcsConfig cfg;
    const auto bank = dcs::load_bank(o.model, &cfg);
    if (o.q >= 0) cfg.q = o.q;
    if (o.reinit >= 0) cfg.reinit_period = o.reinit;

    std::optional<geometry::ElevationPreset> preset;
    int width = 0, height = 0;
    std::vector<hog::HogVector> features;
    features.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        try {
            GrayImage img = read_pnm(files[i].string());
            if (i == 0) {
                width = img.width;
                height = img.height;
                preset = choose_preset(o, width, height);
            } else if (img.width != width || img.height != height) {
                throw Error(ErrorCode::DimensionMismatch, "frame size differs from the first frame");
            }
            if (preset) img = geometry::warp_image(img, preset->matrix, width, height);
            features.push_back(hog::extract(segmentation::segment_frame(img, o.seg.params)));
        } catch (const Error& e) {
            throw with_context(e, "frame " + std::to_string(i) + " (" + files[i].filename().string() + ")");
        }
    }

    const auto states = dcs::run_dcs(features, bank, cfg);
    const auto traj = trajectory::estimate_trajectory(states, o.step_len, trajectory::JumpPolicy::Bridge);

    const fs::path out(o.out);
    make_dirs(out);
    {
        auto f = open_out(out / "states.csv");
        evaluation::write_state_csv(f, states);
    }
    {
        auto f = open_out(out / "trajectory.csv");
        trajectory::write_trajectory_csv(f, traj);
    }
    {
        auto f = open_out(out / "skeletons.jsonl");
        trajectory::write_skeletons_jsonl(f, traj);
    }
    {
        auto f = open_out(out / "trajectory.svg");
        trajectory::write_trajectory_svg(f, traj);
    }
    if (preset) std::printf("perspective corrected with the %.1f deg preset\n", preset->phi);
    std::printf("tracked %zu frames: %zu steps, %zu foot contacts, outputs in %s\n", states.size(),
                static_cast<std::size_t>(std::count(traj.moved.begin(), traj.moved.end(), true)), traj.contacts.size(),
                out.string().c_str());
    return kExitOk;
}

int cmd_eval(const EvalOptions& o) {
    auto tf = open_in(o.truth);
    auto pf = open_in(o.pred);
    const auto truth = evaluation::read_state_csv(tf);
    const auto pred = evaluation::read_state_csv(pf);
    const evaluation::LabeledSequence seq{truth, pred};
    const auto report = evaluation::compute_errors(seq);
    const auto matrix = evaluation::confusion(seq);
    std::cout << evaluation::format_report(report);
    if (!o.out.empty()) {
        const fs::path out(o.out);
        make_dirs(out);
        auto j = open_out(out / "report.json");
        j << evaluation::report_json(report, matrix).dump(2) << '\n';
        auto s = open_out(out / "confusion.svg");
        evaluation::write_confusion_svg(s, matrix);
    }
    return kExitOk;
}

int cmd_plot(const PlotOptions& o) {
    auto in = open_in(o.trajectory);
    const auto traj = trajectory::read_trajectory_csv(in);
    if (!fs::path(o.out).parent_path().empty()) make_dirs(fs::path(o.out).parent_path());
    auto out = open_out(o.out);
    trajectory::write_trajectory_svg(out, traj);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Configuration: flat `key = value` lines; `#` starts a comment. Keys name the
// long options without the leading dashes, with `_` and `-` interchangeable.

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        std::string key = eq == std::string::npos ? "" : trim(line.substr(0, eq));
        if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::replace(key.begin(), key.end(), '_', '-');
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

std::set<std::string> long_names(const CLI::App* app) {
    std::set<std::string> names;
    for (const auto* opt : app->get_options())
        for (const auto& n : opt->get_lnames()) names.insert(n);
    return names;
}

// Config values are spliced in right after the subcommand name, so any flag
// given on the command line comes later and wins (options keep the last value).
std::vector<std::string> apply_config(const CLI::App& app, std::vector<std::string> args) {
    std::string config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
            config = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (config.empty()) return args;

    const auto entries = read_config(config);
    std::set<std::string> known;
    for (const auto* sub : app.get_subcommands({})) {
        const auto names = long_names(sub);
        known.insert(names.begin(), names.end());
    }
    for (const auto& [key, value] : entries)
        if (!known.count(key) || key == "help") throw UsageError(config + ": unknown key '" + key + "'");

    const auto pos = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
        return app.get_subcommand_no_throw(a) != nullptr;
    });
    if (pos == args.end()) return args;
    const auto accepted = long_names(app.get_subcommand(*pos));
    std::vector<std::string> spliced;
    for (const auto& [key, value] : entries) {
        if (!accepted.count(key)) continue;
        spliced.push_back("--" + key);
        spliced.push_back(value);
    }
    args.insert(pos + 1, spliced.begin(), spliced.end());
    return args;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return kExitUsage;
        case ErrorCode::InadmissibleTransition:
        case ErrorCode::InadmissibleViewpointJump:
            return kExitInternal;
        default:
            return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walker pose, viewpoint and trajectory estimation from HOG features and dynamically selected ECOC SVMs"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file; command-line flags override its values");

    SynthOptions synth;
    auto* s = app.add_subcommand("synth", "Render a labelled silhouette corpus, a walk and elevation presets");
    s->add_option("--out", synth.out, "Output directory")->required();
    s->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
    s->add_option("--per-class", synth.per_class, "Silhouettes per pose-viewpoint class")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--noise", synth.noise, "Salt-and-pepper probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    s->add_option("--elevation", synth.elevation, "Camera elevation in degrees")->capture_default_str();
    s->add_option("--walk", synth.walk, "Walk path: straight, circle, figure8 or none")->capture_default_str();
    s->add_option("--cycles", synth.cycles, "Walk repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--frames-per-pose", synth.frames_per_pose, "Frames per gait sub-step")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--walk-jitter", synth.walk_jitter, "Per-frame azimuth wobble in degrees")->capture_default_str();
    s->add_option("--start-view", synth.start_view, "Initial viewpoint 1..8")->capture_default_str()->check(CLI::Range(1, 8));
    s->add_option("--frame-width", synth.frame_width, "Walk frame width")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--frame-height", synth.frame_height, "Walk frame height")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--focal", synth.focal, "Focal length in pixels for the presets")->capture_default_str()->check(CLI::PositiveNumber);

    TrainOptions train;
    auto* t = app.add_subcommand("train", "Train the 64-class and 64 four-class models");
    t->add_option("--dataset", train.dataset, "Directory of P<i>_V<j>/*.pgm samples")->required();
    t->add_option("--model", train.model, "Output bank directory")->required();
    t->add_option("--seed", train.seed, "Master seed")->capture_default_str();
    t->add_option("--c", train.train.c, "SVM penalty")->capture_default_str()->check(CLI::PositiveNumber);
    t->add_option("--tol", train.train.tol, "Dual coordinate descent tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    t->add_option("--max-epochs", train.train.max_epochs, "Epoch cap per binary learner")->capture_default_str()->check(CLI::PositiveNumber);
    t->add_option("--q", train.dcs.q, "Initialization frames stored as the bank default")->capture_default_str()->check(CLI::PositiveNumber);
    t->add_option("--reinit", train.dcs.reinit_period, "Re-initialization period stored as the bank default, 0 = never")->capture_default_str()->check(CLI::NonNegativeNumber);
    train.seg.add_to(t);

    TrackOptions track;
    auto* k = app.add_subcommand("track", "Estimate states and the trajectory of a frame sequence");
    k->add_option("--frames", track.frames, "Directory of .pgm/.ppm frames, processed in name order")->required();
    k->add_option("--model", track.model, "Bank directory written by train")->required();
    k->add_option("--out", track.out, "Output directory")->required();
    k->add_option("--elevation", track.elevation, "Camera elevation in degrees; 5 or more enables correction")->capture_default_str();
    k->add_option("--presets", track.presets, "Preset file; without it a preset is built for the exact elevation");
    k->add_option("--focal", track.focal, "Focal length in pixels when building a preset")->capture_default_str()->check(CLI::PositiveNumber);
    k->add_option("--q", track.q, "Initialization frames (default: bank setting)")->check(CLI::PositiveNumber);
    k->add_option("--reinit", track.reinit, "Re-initialization period (default: bank setting)")->check(CLI::NonNegativeNumber);
    k->add_option("--step-len", track.step_len, "Distance per pose change")->capture_default_str()->check(CLI::PositiveNumber);
    track.seg.add_to(k);

    EvalOptions eval;
    auto* e = app.add_subcommand("eval", "Score predicted states against ground truth");
    e->add_option("--truth", eval.truth, "Ground-truth CSV frame,pose,viewpoint")->required();
    e->add_option("--pred", eval.pred, "Predicted CSV frame,pose,viewpoint")->required();
    e->add_option("--out", eval.out, "Directory for report.json and confusion.svg");

    PlotOptions plot;
    auto* p = app.add_subcommand("plot", "Draw a trajectory CSV as SVG");
    p->add_option("--trajectory", plot.trajectory, "Trajectory CSV written by track")->required();
    p->add_option("--out", plot.out, "Output SVG file")->required();

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config(app, std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& err) {
        std::fprintf(stderr, "usage error: %s\n", err.what());
        return kExitUsage;
    }

    try {
        if (*s) return cmd_synth(synth);
        if (*t) return cmd_train(train);
        if (*k) return cmd_track(track);
        if (*e) return cmd_eval(eval);
        if (*p) return cmd_plot(plot);
        return kExitUsage;
    } catch (const Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return exit_code_for(err.code());
    } catch (const std::exception& err) {
        std::fprintf(stderr, "internal error: %s\n", err.what());
        return kExitInternal;
    }
}
