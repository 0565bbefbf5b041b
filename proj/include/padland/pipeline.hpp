// The complete per-frame detection chain.
//
// Stage order is fixed: greyscale, gaussian, threshold, erosion, median,
// dilation, ccl, followed by shape classification and marker assembly
// ("analysis").

#pragma once

#include "padland/ccl.hpp"
#include "padland/frame.hpp"
#include "padland/marker.hpp"
#include "padland/shapes.hpp"
#include "padland/threshold.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace padland {

inline constexpr std::array<std::string_view, 7> kStageNames{"greyscale", "gaussian", "threshold", "erosion",
                                                            "median",    "dilation", "ccl"};
inline constexpr std::string_view kAnalysisStage = "analysis";

struct PipelineConfig {
    BinarizeMode binarize = BinarizeMode::Interpolated;
    Connectivity connectivity = Connectivity::Eight;
    int window = kDefaultWindow;
    int local_radius = kDefaultLocalRadius;
    double global_threshold = 100.0;
    /// Apply the previous frame's grid (interp/window modes only).
    bool frame_lag = true;
};

struct DetectorConfig {
    MarkerSpec spec;
    CameraModel camera;
    ToleranceProfile tolerances;
    AssemblyParams assembly;
    PipelineConfig pipeline;
};

struct StageTimings {
    std::array<double, 7> stage_ms{};  // kStageNames order
    double analysis_ms = 0.0;
    double total_ms() const;
};

struct FrameResult {
    std::int64_t frame_index = 0;
    double altitude_m = 0.0;
    std::vector<ComponentRecord> components;
    std::vector<ShapeDetection> detections;
    std::optional<MarkerAssembly> assembly;
    std::optional<MarkerPose> pose;
    StageTimings timings;
};

/**
 * Stateful only through the frame-lag threshold grid. One instance per frame
 * sequence; call reset() before an unrelated frame when frame_lag is on.
 */
class DetectionPipeline {
public:
    explicit DetectionPipeline(DetectorConfig config);

    /// @p frame may be RGB or Grey. @p altitude_m is the LiDAR reading used by
    /// the size gate; at or below 0.05 m no shapes are classified.
    FrameResult process(const Frame& frame, double altitude_m);

    /// The binary image after dilation, for inspection.
    Frame binarize(const Frame& grey);

    void reset();
    const DetectorConfig& config() const noexcept { return config_; }

private:
    DetectorConfig config_;
    ThresholdStream stream_;
    std::int64_t next_index_ = 0;
};

}  // namespace padland
