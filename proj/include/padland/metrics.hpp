// Detection-quality metrics computed from per-frame results and ground truth.

#pragma once

#include "padland/marker.hpp"
#include "padland/synth.hpp"

#include <optional>
#include <vector>

namespace padland {

/// What the detector reported for one frame.
struct FrameOutcome {
    std::optional<MarkerPose> pose;
    std::vector<ShapeDetection> detections;
};

struct EvalMetrics {
    int frames = 0;
    int marker_frames = 0;   // truth says the marker is in the scene
    int fixes = 0;           // frames with any pose
    int detected = 0;        // pose within success_radius_px of the true centre
    double detection_rate = 0.0;  // detected / marker_frames
    Vec2 centre_mae_px;      // per axis, over detected frames
    double orientation_mae_deg = 0.0;  // over detected FullMarker frames
    int orientation_frames = 0;
    int false_shapes = 0;    // detections not inside the true marker bbox
    int false_fixes = 0;     // fixes on marker-free frames or far from the truth
};

inline constexpr double kSuccessRadiusPx = 10.0;

/// Per-axis mean of absolute values; zero for an empty input.
Vec2 per_axis_mae(const std::vector<Vec2>& errors);

/// |a - b| folded into [0, 180].
double angle_error_deg(double a, double b);

/**
 * A shape is false when the frame has no marker or its bbox is not contained in
 * the true large-circle bbox grown by @p margin_px.
 */
bool is_false_shape(const ShapeDetection& d, const GroundTruth& truth, double margin_px = 2.0);

/// Throws ContractError when the two lists differ in length.
EvalMetrics evaluate(const std::vector<FrameOutcome>& outcomes, const std::vector<GroundTruth>& truth,
                     double success_radius_px = kSuccessRadiusPx);

}  // namespace padland
