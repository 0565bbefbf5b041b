#include "padland/metrics.hpp"

#include <cmath>

namespace padland {

Vec2 per_axis_mae(const std::vector<Vec2>& errors) {
    if (errors.empty()) return {};
    Vec2 sum;
    for (const auto& e : errors) {
        sum.x += std::abs(e.x);
        sum.y += std::abs(e.y);
    }
    const auto n = static_cast<double>(errors.size());
    return {sum.x / n, sum.y / n};
}

double angle_error_deg(double a, double b) { return std::abs(wrap_degrees(a - b)); }

bool is_false_shape(const ShapeDetection& d, const GroundTruth& truth, double margin_px) {
    if (!truth.marker_present) return true;
    RealBox grown = truth.large_circle.bbox;
    grown.min_x -= margin_px;
    grown.min_y -= margin_px;
    grown.max_x += margin_px;
    grown.max_y += margin_px;
    return !grown.contains(d.component.bbox);
}

EvalMetrics evaluate(const std::vector<FrameOutcome>& outcomes, const std::vector<GroundTruth>& truth,
                     double success_radius_px) {
    if (outcomes.size() != truth.size()) {
        throw ContractError("evaluate: " + std::to_string(outcomes.size()) + " results for " +
                            std::to_string(truth.size()) + " truth records");
    }
    EvalMetrics m;
    m.frames = static_cast<int>(outcomes.size());
    std::vector<Vec2> centre_errors;
    double orientation_sum = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& out = outcomes[i];
        const auto& gt = truth[i];
        if (gt.marker_present) ++m.marker_frames;
        for (const auto& d : out.detections) m.false_shapes += is_false_shape(d, gt) ? 1 : 0;
        if (!out.pose) continue;
        ++m.fixes;
        const Vec2 err{out.pose->centre_px.x - gt.centre_px.x, out.pose->centre_px.y - gt.centre_px.y};
        if (!gt.marker_present || std::hypot(err.x, err.y) > success_radius_px) {
            ++m.false_fixes;
            continue;
        }
        ++m.detected;
        centre_errors.push_back(err);
        if (out.pose->source == PoseSource::FullMarker && out.pose->orientation_deg) {
            orientation_sum += angle_error_deg(*out.pose->orientation_deg, gt.orientation_deg);
            ++m.orientation_frames;
        }
    }
    m.detection_rate = m.marker_frames > 0 ? static_cast<double>(m.detected) / m.marker_frames : 0.0;
    m.centre_mae_px = per_axis_mae(centre_errors);
    m.orientation_mae_deg = m.orientation_frames > 0 ? orientation_sum / m.orientation_frames : 0.0;
    return m;
}

}  // namespace padland
