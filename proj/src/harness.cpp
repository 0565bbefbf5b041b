#include "padland/harness.hpp"

#include "padland/json_io.hpp"
#include "padland/lander.hpp"
#include "padland/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace padland {

namespace fs = std::filesystem;

json frame_record(const FrameResult& r) {
    json timings = json::object();
    for (std::size_t i = 0; i < kStageNames.size(); ++i) timings[std::string(kStageNames[i])] = r.timings.stage_ms[i];
    timings[std::string(kAnalysisStage)] = r.timings.analysis_ms;
    return json{{"frame_index", r.frame_index}, {"altitude_m", r.altitude_m}, {"components", r.components.size()},
                {"detections", r.detections},   {"pose", r.pose},             {"timings_ms", timings}};
}

std::vector<Overlay> result_overlays(const FrameResult& r, const MarkerSpec& spec) {
    std::vector<Overlay> out;
    for (const auto& d : r.detections) {
        Rgb color = colors::kRed;
        switch (d.shape_class) {
            case ShapeClass::LargeCircle: color = colors::kRed; break;
            case ShapeClass::SmallCircle: color = colors::kMagenta; break;
            case ShapeClass::Square: color = colors::kGreen; break;
            case ShapeClass::Rectangle: color = colors::kBlue; break;
        }
        const auto& b = d.component.bbox;
        out.push_back({BoxOverlay{b.min_x, b.min_y, b.max_x, b.max_y}, color});
    }
    if (r.pose) {
        const auto c = r.pose->centre_px;
        if (r.pose->orientation_deg) {
            double length = 40.0;
            if (r.assembly && r.assembly->large_circle) length = r.assembly->large_circle->component.bbox.width() / 2.0;
            const double a = (*r.pose->orientation_deg + spec.nominal_axis_deg) * std::numbers::pi / 180.0;
            out.push_back({LineOverlay{c.x, c.y, c.x + length * std::cos(a), c.y + length * std::sin(a)},
                           colors::kOrange});
        }
        out.push_back({PointOverlay{c.x, c.y}, colors::kRed});
    }
    return out;
}

namespace {

double altitude_for(const std::map<std::int64_t, double>& log, std::int64_t index, const fs::path& where) {
    const auto it = log.find(index);
    if (it == log.end()) {
        throw IoError("altitude log " + where.string() + " has no entry for frame " + std::to_string(index));
    }
    return it->second;
}

std::vector<GroundTruth> read_truth(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<GroundTruth> truth;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            truth.push_back(json::parse(line).get<GroundTruth>());
        } catch (const json::exception& e) {
            throw ContractError(path.string() + ": " + e.what());
        }
    }
    return truth;
}

CorpusEvaluation score(CorpusEvaluation eval) {
    std::vector<FrameOutcome> outcomes;
    outcomes.reserve(eval.results.size());
    for (const auto& r : eval.results) outcomes.push_back({r.pose, r.detections});
    eval.metrics = evaluate(outcomes, eval.truth);
    return eval;
}

}  // namespace

std::vector<FrameResult> detect_sequence(const fs::path& dir, const DetectorConfig& config) {
    const auto indices = list_sequence_frames(dir);
    const auto log_path = dir / "altitude.csv";
    if (!fs::exists(log_path)) throw IoError("missing altitude log " + log_path.string());
    const auto altitudes = read_altitude_log(log_path);
    DetectionPipeline pipeline(config);
    std::vector<FrameResult> results;
    results.reserve(indices.size());
    for (const auto index : indices) {
        const double altitude = altitude_for(altitudes, index, log_path);
        auto frame = load_pnm(sequence_frame_path(dir, index));
        frame.set_frame_index(index);
        results.push_back(pipeline.process(frame, altitude));
    }
    return results;
}

CorpusEvaluation evaluate_corpus(const fs::path& dir, DetectorConfig config) {
    CorpusEvaluation eval;
    eval.truth = read_truth(dir / "truth.jsonl");
    const auto indices = list_sequence_frames(dir);
    if (indices.size() != eval.truth.size()) {
        throw ContractError("corpus " + dir.string() + " has " + std::to_string(indices.size()) + " frames but " +
                            std::to_string(eval.truth.size()) + " truth records");
    }
    const auto log_path = dir / "altitude.csv";
    if (!fs::exists(log_path)) throw IoError("missing altitude log " + log_path.string());
    const auto altitudes = read_altitude_log(log_path);

    // Corpus frames are unrelated scenes, so each one is thresholded on its own.
    config.pipeline.frame_lag = false;
    DetectionPipeline pipeline(config);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (eval.truth[i].frame_index != indices[i]) {
            throw ContractError("truth record " + std::to_string(i) + " does not match frame " +
                                std::to_string(indices[i]));
        }
        auto frame = load_pnm(sequence_frame_path(dir, indices[i]));
        frame.set_frame_index(indices[i]);
        eval.results.push_back(pipeline.process(frame, altitude_for(altitudes, indices[i], log_path)));
    }
    return score(std::move(eval));
}

CorpusEvaluation evaluate_renders(const std::vector<RenderResult>& renders, DetectorConfig config) {
    config.pipeline.frame_lag = false;
    DetectionPipeline pipeline(config);
    CorpusEvaluation eval;
    for (const auto& r : renders) {
        eval.truth.push_back(r.truth);
        eval.results.push_back(pipeline.process(r.frame, r.truth.pose.altitude));
    }
    return score(std::move(eval));
}

json metrics_json(const EvalMetrics& m) {
    return json{{"frames", m.frames},
                {"marker_frames", m.marker_frames},
                {"fixes", m.fixes},
                {"detected", m.detected},
                {"detection_rate", m.detection_rate},
                {"centre_mae_px", m.centre_mae_px},
                {"orientation_mae_deg", m.orientation_mae_deg},
                {"orientation_frames", m.orientation_frames},
                {"false_shapes", m.false_shapes},
                {"false_fixes", m.false_fixes}};
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(std::clamp(q, 0.0, 1.0) * values.size()));
    return values[rank == 0 ? 0 : rank - 1];
}

BenchReport run_bench(DetectorConfig config, int width, int height, int frames, std::uint64_t seed) {
    if (frames < 10) throw ContractError("bench needs at least 10 frames");
    if (width < 64 || height < 64) throw ContractError("bench resolution must be at least 64x64");
    // Keep the field of view of the configured camera.
    config.camera.focal_px *= static_cast<double>(width) / config.camera.width;
    config.camera.width = width;
    config.camera.height = height;

    // A short descending, rotating approach looped over the requested count.
    constexpr int kDistinct = 8;
    std::vector<Frame> scenes;
    for (int i = 0; i < kDistinct; ++i) {
        ScenePose pose;
        pose.altitude = 1.4 - 0.1 * i;
        pose.yaw_deg = -30.0 + 8.0 * i;
        pose.x = 0.05 * std::sin(i);
        pose.y = 0.04 * std::cos(i);
        pose.noise_sigma = 2.0;
        pose.illumination.gain_x = 15.0;
        scenes.push_back(render(config.spec, config.camera, pose, frame_seed(seed, i), i).frame);
    }

    DetectionPipeline pipeline(config);
    std::array<std::vector<double>, 7> stage_ms;
    std::vector<double> analysis_ms, total_ms;
    const auto started = std::chrono::steady_clock::now();
    for (int i = 0; i < frames; ++i) {
        const auto& scene = scenes[static_cast<std::size_t>(i % kDistinct)];
        const double altitude = 1.4 - 0.1 * (i % kDistinct);
        const auto frame_start = std::chrono::steady_clock::now();
        const auto r = pipeline.process(scene, altitude);
        total_ms.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - frame_start).count());
        for (std::size_t s = 0; s < stage_ms.size(); ++s) stage_ms[s].push_back(r.timings.stage_ms[s]);
        analysis_ms.push_back(r.timings.analysis_ms);
    }
    const double total_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    BenchReport report;
    report.width = width;
    report.height = height;
    report.frames = frames;
    auto summarize = [](const std::vector<double>& v) { return LatencySummary{percentile(v, 0.5), percentile(v, 0.95)}; };
    for (std::size_t s = 0; s < stage_ms.size(); ++s) report.stages[s] = summarize(stage_ms[s]);
    report.analysis = summarize(analysis_ms);
    report.end_to_end = summarize(total_ms);
    report.total_s = total_s;
    report.fps = total_s > 0 ? frames / total_s : 0.0;
    return report;
}

json bench_json(const BenchReport& r) {
    auto summary = [](const LatencySummary& s) { return json{{"median_ms", s.median_ms}, {"p95_ms", s.p95_ms}}; };
    json stages = json::object();
    for (std::size_t s = 0; s < kStageNames.size(); ++s) stages[std::string(kStageNames[s])] = summary(r.stages[s]);
    stages[std::string(kAnalysisStage)] = summary(r.analysis);
    return json{{"width", r.width},   {"height", r.height}, {"frames", r.frames},
                {"stages", stages},   {"end_to_end", summary(r.end_to_end)},
                {"total_s", r.total_s}, {"fps", r.fps}};
}

// --- command line -------------------------------------------------------------

namespace {

// Input or configuration problems; mapped to exit code 2.
struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    std::string binarize;
    int connectivity = 0;
    std::string out;
    std::uint64_t seed = 1;
};

Config resolve_config(const CommonOptions& o) {
    Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
    if (!o.binarize.empty()) cfg.detector.pipeline.binarize = parse_binarize_mode(o.binarize);
    if (o.connectivity != 0) cfg.detector.pipeline.connectivity = parse_connectivity(o.connectivity);
    cfg.validate();
    return cfg;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw IoError("cannot write " + path);
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

std::int64_t index_from_name(const fs::path& path) {
    const auto stem = path.stem().string();
    const auto pos = stem.find_last_of('_');
    const std::string digits = pos == std::string::npos ? stem : stem.substr(pos + 1);
    std::int64_t index = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    return ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() ? index : 0;
}

void write_annotation(const fs::path& dir, const Frame& frame, const FrameResult& r, const MarkerSpec& spec) {
    fs::create_directories(dir);
    const auto overlays = result_overlays(r, spec);
    save_pnm(annotate(frame, overlays), dir / sequence_frame_name(r.frame_index));
}

int cmd_detect(const CommonOptions& o, const std::string& input, std::optional<double> altitude,
               const std::string& annotate_dir, std::ostream& out) {
    const Config cfg = resolve_config(o);
    Output sink(o.out, out);
    const fs::path path(input);
    if (fs::is_directory(path)) {
        const auto log_path = path / "altitude.csv";
        if (!altitude && !fs::exists(log_path)) throw BadInput("missing altitude log " + log_path.string());
        const auto indices = list_sequence_frames(path);
        const auto altitudes = altitude ? std::map<std::int64_t, double>{} : read_altitude_log(log_path);
        DetectionPipeline pipeline(cfg.detector);
        for (const auto index : indices) {
            auto frame = load_pnm(sequence_frame_path(path, index));
            frame.set_frame_index(index);
            const double alt = altitude ? *altitude : altitude_for(altitudes, index, log_path);
            const auto r = pipeline.process(frame, alt);
            sink.get() << frame_record(r).dump() << '\n';
            if (!annotate_dir.empty()) write_annotation(annotate_dir, frame, r, cfg.detector.spec);
        }
        return 0;
    }
    if (!fs::exists(path)) throw BadInput("no such input " + input);
    const auto index = index_from_name(path);
    if (!altitude) {
        const auto log_path = path.parent_path() / "altitude.csv";
        if (!fs::exists(log_path)) throw BadInput("missing altitude log " + log_path.string() + " (or pass --altitude)");
        altitude = altitude_for(read_altitude_log(log_path), index, log_path);
    }
    auto frame = load_pnm(path);
    frame.set_frame_index(index);
    DetectionPipeline pipeline(cfg.detector);
    const auto r = pipeline.process(frame, *altitude);
    sink.get() << frame_record(r).dump() << '\n';
    if (!annotate_dir.empty()) write_annotation(annotate_dir, frame, r, cfg.detector.spec);
    return 0;
}

int cmd_eval(const CommonOptions& o, const std::string& dir, std::ostream& out) {
    const Config cfg = resolve_config(o);
    const auto eval = evaluate_corpus(dir, cfg.detector);
    const auto doc = metrics_json(eval.metrics);
    if (!o.out.empty()) {
        Output sink(o.out, out);
        sink.get() << doc.dump(2) << '\n';
    }
    const auto& m = eval.metrics;
    out << std::fixed << std::setprecision(3) << "frames            " << m.frames << '\n'
        << "detected          " << m.detected << " / " << m.marker_frames << '\n'
        << "detection rate    " << m.detection_rate << '\n'
        << "centre MAE px     " << m.centre_mae_px.x << " (x)  " << m.centre_mae_px.y << " (y)\n"
        << "orientation MAE   " << m.orientation_mae_deg << " deg over " << m.orientation_frames << " frames\n"
        << "false shapes      " << m.false_shapes << '\n'
        << "false fixes       " << m.false_fixes << '\n';
    return 0;
}

struct RenderOptions {
    int frames = 50;
    bool marker_free = false;
    std::string background;
    std::optional<double> altitude;
    double x = 0.0, y = 0.0, yaw = 0.0;
    double noise = 0.0;
    int sever = 0;
};

int cmd_render(const CommonOptions& o, const RenderOptions& r, std::ostream& out) {
    const Config cfg = resolve_config(o);
    if (o.out.empty()) throw BadInput("render needs --out DIR");
    const fs::path dir(o.out);
    const auto& spec = cfg.detector.spec;
    const auto& cam = cfg.detector.camera;
    if (r.altitude) {
        ScenePose pose;
        pose.x = r.x;
        pose.y = r.y;
        pose.altitude = *r.altitude;
        pose.yaw_deg = r.yaw;
        pose.noise_sigma = r.noise;
        pose.marker_present = !r.marker_free;
        if (!r.background.empty()) pose.background.kind = parse_background_kind(r.background);
        auto rendered = render(spec, cam, pose, frame_seed(o.seed, 0), 0);
        if (r.sever > 0) sever_ring(rendered.frame, spec, cam, pose, r.sever, 4.0);
        fs::create_directories(dir);
        save_pnm(rendered.frame, dir / sequence_frame_name(0));
        write_altitude_log(dir / "altitude.csv", {{0, pose.altitude}});
        std::ofstream truth(dir / "truth.jsonl");
        truth << json(rendered.truth).dump() << '\n';
        if (!truth) throw IoError("cannot write " + (dir / "truth.jsonl").string());
        out << "wrote 1 frame to " << dir.string() << '\n';
        return 0;
    }
    if (r.frames < 1) throw BadInput("--frames must be at least 1");
    CorpusRecipe recipe;
    recipe.marker_present = !r.marker_free;
    if (!r.background.empty()) recipe.backgrounds = {parse_background_kind(r.background)};
    recipe.low_altitude_cutoff_m = cfg.detector.assembly.low_altitude_cutoff_m;
    make_corpus(recipe, spec, cam, r.frames, o.seed, dir);
    out << "wrote " << r.frames << " frames to " << dir.string() << '\n';
    return 0;
}

struct SimulateOptions {
    double x = 0.3, y = -0.2, altitude = 1.5, yaw = 20.0;
    std::optional<double> remove_marker_at;
};

int cmd_simulate(const CommonOptions& o, const SimulateOptions& s, std::ostream& out) {
    const Config cfg = resolve_config(o);
    DroneState initial;
    initial.x = s.x;
    initial.y = s.y;
    initial.altitude = s.altitude;
    initial.yaw_deg = s.yaw;
    SimulationOptions opts;
    opts.marker_removed_at_s = s.remove_marker_at;
    opts.keep_log = !o.out.empty();
    const auto result = simulate(initial, cfg.detector, cfg.lander, o.seed, opts);
    if (!o.out.empty()) {
        Output sink(o.out, out);
        for (const auto& rec : result.log) sink.get() << json(rec).dump() << '\n';
    }
    const auto& f = result.final_state;
    out << json{{"landed", result.landed},
                {"final_phase", result.final_phase},
                {"ticks", result.ticks},
                {"elapsed_s", result.elapsed_s},
                {"final_state", f},
                {"position_error_m", std::hypot(f.x, f.y)},
                {"yaw_error_deg", std::abs(wrap_degrees(f.yaw_deg))},
                {"motors_off_altitude_m", result.motors_off_true_altitude},
                {"entered_abort", result.entered_abort}}
               .dump(2)
        << '\n';
    return 0;
}

int cmd_bench(const CommonOptions& o, int width, int height, int frames, std::ostream& out) {
    const Config cfg = resolve_config(o);
    const auto report = run_bench(cfg.detector, width, height, frames, o.seed);
    if (!o.out.empty()) {
        Output sink(o.out, out);
        sink.get() << bench_json(report).dump(2) << '\n';
    }
    out << "resolution " << width << "x" << height << ", " << frames << " frames, single thread\n";
    out << std::left << std::setw(12) << "stage" << std::right << std::setw(12) << "median ms" << std::setw(12)
        << "p95 ms" << '\n';
    out << std::fixed << std::setprecision(3);
    for (std::size_t s = 0; s < kStageNames.size(); ++s) {
        out << std::left << std::setw(12) << kStageNames[s] << std::right << std::setw(12) << report.stages[s].median_ms
            << std::setw(12) << report.stages[s].p95_ms << '\n';
    }
    out << std::left << std::setw(12) << kAnalysisStage << std::right << std::setw(12) << report.analysis.median_ms
        << std::setw(12) << report.analysis.p95_ms << '\n';
    out << std::left << std::setw(12) << "end-to-end" << std::right << std::setw(12) << report.end_to_end.median_ms
        << std::setw(12) << report.end_to_end.p95_ms << '\n';
    out << std::setprecision(2) << "fps " << report.fps << " (" << frames << " frames in " << report.total_s << " s)\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Landing pad marker detection and landing simulation", "padland"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--config", common.config_path, "JSON configuration file");
    app.add_option("--binarize", common.binarize, "interp | window | local | global");
    app.add_option("--connectivity", common.connectivity, "4 or 8");
    app.add_option("--out", common.out, "output file or directory");
    app.add_option("--seed", common.seed, "random seed");

    auto* detect = app.add_subcommand("detect", "detect the marker in an image or a frame sequence");
    std::string input, annotate_dir;
    std::optional<double> altitude;
    detect->add_option("input", input, "PNM image or sequence directory")->required();
    detect->add_option("--annotate", annotate_dir, "write overlay images to this directory");
    detect->add_option("--altitude", altitude, "altitude in metres, instead of altitude.csv");

    auto* eval = app.add_subcommand("eval", "score detection on a corpus with truth.jsonl");
    std::string corpus;
    eval->add_option("corpus", corpus, "corpus directory")->required();

    auto* render_cmd = app.add_subcommand("render", "render a synthetic corpus or a single frame");
    RenderOptions ro;
    render_cmd->add_option("--frames", ro.frames, "number of corpus frames");
    render_cmd->add_flag("--marker-free", ro.marker_free, "leave the marker out");
    render_cmd->add_option("--background", ro.background, "uniform | checker | texture");
    render_cmd->add_option("--altitude", ro.altitude, "render one frame at this altitude");
    render_cmd->add_option("--x", ro.x, "drone x offset, metres (single frame)");
    render_cmd->add_option("--y", ro.y, "drone y offset, metres (single frame)");
    render_cmd->add_option("--yaw", ro.yaw, "yaw, degrees (single frame)");
    render_cmd->add_option("--noise", ro.noise, "pixel noise sigma (single frame)");
    render_cmd->add_option("--sever", ro.sever, "cut the ring into this many arcs (single frame)");

    auto* sim = app.add_subcommand("simulate", "closed-loop landing simulation");
    SimulateOptions so;
    sim->add_option("--x", so.x, "initial x offset, metres");
    sim->add_option("--y", so.y, "initial y offset, metres");
    sim->add_option("--altitude", so.altitude, "initial altitude, metres");
    sim->add_option("--yaw", so.yaw, "initial yaw, degrees");
    sim->add_option("--remove-marker-at", so.remove_marker_at, "take the marker away at this time, seconds");

    auto* bench = app.add_subcommand("bench", "per-stage latency benchmark");
    int width = 1280, height = 720, frames = 100;
    bench->add_option("--width", width, "frame width");
    bench->add_option("--height", height, "frame height");
    bench->add_option("--frames", frames, "number of frames (>= 10)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "padland: " << e.what() << '\n';
        return 2;
    }

    try {
        if (detect->parsed()) return cmd_detect(common, input, altitude, annotate_dir, out);
        if (eval->parsed()) return cmd_eval(common, corpus, out);
        if (render_cmd->parsed()) return cmd_render(common, ro, out);
        if (sim->parsed()) return cmd_simulate(common, so, out);
        if (bench->parsed()) return cmd_bench(common, width, height, frames, out);
    } catch (const BadInput& e) {
        err << "padland: " << e.what() << '\n';
        return 2;
    } catch (const ContractError& e) {
        err << "padland: " << e.what() << '\n';
        return 2;
    } catch (const DecodeError& e) {
        err << "padland: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "padland: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "padland: internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace padland
