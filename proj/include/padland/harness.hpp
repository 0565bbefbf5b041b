// Library side of the command-line tool: detection over files and
//        sequences, corpus evaluation, benchmarking and the CLI dispatcher.

#pragma once

#include "padland/config.hpp"
#include "padland/imgio.hpp"
#include "padland/metrics.hpp"
#include "padland/pipeline.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace padland {

/// One JSON line of `detect` output.
nlohmann::json frame_record(const FrameResult& result);

/// Overlay colours: large circle red, square green, rectangle blue, small
/// circle magenta, centre dot red, orientation line orange.
std::vector<Overlay> result_overlays(const FrameResult& result, const MarkerSpec& spec);

/**
 * Runs the pipeline over every frame_NNNNNN image of @p dir in index order,
 * taking altitudes from dir/altitude.csv. Throws IoError if the log is missing
 * or lacks an entry for a frame.
 */
std::vector<FrameResult> detect_sequence(const std::filesystem::path& dir, const DetectorConfig& config);

struct CorpusEvaluation {
    EvalMetrics metrics;
    std::vector<FrameResult> results;
    std::vector<GroundTruth> truth;
};

/// Reads truth.jsonl, detects every frame independently and scores it.
CorpusEvaluation evaluate_corpus(const std::filesystem::path& dir, DetectorConfig config);

/// Scores in-memory renders (same rules as evaluate_corpus).
CorpusEvaluation evaluate_renders(const std::vector<RenderResult>& renders, DetectorConfig config);

nlohmann::json metrics_json(const EvalMetrics& m);

struct LatencySummary {
    double median_ms = 0.0;
    double p95_ms = 0.0;
};

struct BenchReport {
    int width = 0, height = 0, frames = 0;
    std::array<LatencySummary, 7> stages;  // kStageNames order
    LatencySummary analysis;
    LatencySummary end_to_end;
    double total_s = 0.0;
    double fps = 0.0;  // frames / total_s
};

/// Synthesizes a short looping sequence at @p width x @p height and times the
/// pipeline on @p frames frames (at least 10).
BenchReport run_bench(DetectorConfig config, int width, int height, int frames, std::uint64_t seed);

nlohmann::json bench_json(const BenchReport& report);

/// Nearest-rank percentile of @p values (copied), q in [0, 1].
double percentile(std::vector<double> values, double q);

/// Entry point of the `padland` tool. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padland
