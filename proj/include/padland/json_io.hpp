// nlohmann/json conversions for the public record and parameter types.
//
// Parameter structs read with defaults: missing keys keep their default value.
// Key validation (rejecting unknown keys) is done by the config loader.

#pragma once

#include "padland/ccl.hpp"
#include "padland/lander.hpp"
#include "padland/marker.hpp"
#include "padland/pipeline.hpp"
#include "padland/shapes.hpp"
#include "padland/synth.hpp"

#include <json.hpp>

#include <optional>

NLOHMANN_JSON_NAMESPACE_BEGIN
template <typename T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& v) {
        if (v) j = *v;
        else j = nullptr;
    }
    static void from_json(const json& j, std::optional<T>& v) {
        if (j.is_null()) v.reset();
        else v = j.get<T>();
    }
};
NLOHMANN_JSON_NAMESPACE_END

namespace padland {

using nlohmann::json;

// Enumerations travel as their lowercase names.
inline void to_json(json& j, ShapeClass v) { j = to_string(v); }
inline void from_json(const json& j, ShapeClass& v) { v = parse_shape_class(j.get<std::string>()); }
inline void to_json(json& j, PoseSource v) { j = to_string(v); }
inline void from_json(const json& j, PoseSource& v) {
    const auto s = j.get<std::string>();
    if (s == to_string(PoseSource::FullMarker)) v = PoseSource::FullMarker;
    else if (s == to_string(PoseSource::SmallCircleOnly)) v = PoseSource::SmallCircleOnly;
    else throw ContractError("unknown pose source '" + s + "'");
}
inline void to_json(json& j, BinarizeMode v) { j = to_string(v); }
inline void from_json(const json& j, BinarizeMode& v) { v = parse_binarize_mode(j.get<std::string>()); }
inline void to_json(json& j, Connectivity v) { j = static_cast<int>(v); }
inline void from_json(const json& j, Connectivity& v) { v = parse_connectivity(j.get<int>()); }
inline void to_json(json& j, LandingPhase v) { j = to_string(v); }
inline void from_json(const json& j, LandingPhase& v) { v = parse_landing_phase(j.get<std::string>()); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Vec2, x, y)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BoundingBox, min_x, min_y, max_x, max_y)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ComponentRecord, label, area, bbox, cx, cy, touches_border)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ShapeDetection, shape_class, component, expected_area, match_error)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MarkerPose, centre_px, offset_px, offset_cm, orientation_deg,
                                                orientation_stale, altitude_m, source)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MarkerSpec, large_circle_outer_diameter, ring_thickness,
                                                small_circle_diameter, square_side, rect_width, rect_height,
                                                square_centre_offset, rect_centre_offset, nominal_axis_deg, pad_side)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CameraModel, focal_px, width, height)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Window, lo, hi)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ToleranceProfile, area_tolerance, max_aspect, ring_extent,
                                                small_circle_extent, square_extent, rect_extent, circle_diameter,
                                                ring_centre_offset, edge_shrink_px, reject_border)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AssemblyParams, low_altitude_cutoff_m, min_axis_ratio, max_axis_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PipelineConfig, binarize, connectivity, window, local_radius,
                                                global_threshold, frame_lag)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Illumination, base, ink, gain_x, gain_y)

inline void to_json(json& j, Background::Kind v) { j = to_string(v); }
inline void from_json(const json& j, Background::Kind& v) { v = parse_background_kind(j.get<std::string>()); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Background, kind, level, period_px, level_a, level_b, texture_seed,
                                                texture_mean, texture_contrast, texture_scale_px, tint)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScenePose, x, y, altitude, yaw_deg, illumination, noise_sigma,
                                                background, marker_present)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RealBox, min_x, min_y, max_x, max_y)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FigureTruth, bbox, visible)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GroundTruth, frame_index, marker_present, marker_visible, centre_px,
                                                orientation_deg, large_circle, small_circle, square, rectangle, pose)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LandingCommand, vx, vy, vz, yaw_rate, motors_off)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DroneState, x, y, altitude, yaw_deg, vx, vy, vz, yaw_rate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LanderParams, control_period_s, kp_xy, k_yaw, k_alt, max_vxy, max_vz,
                                                max_yaw_rate, centre_band_px, centre_hold_s, yaw_band_deg,
                                                orient_altitude_m, orient_altitude_band_m, descend_rate,
                                                touchdown_altitude_m, hold_after_s, abort_after_s, abort_altitude_m,
                                                abort_altitude_band_m, max_lidar_m, tau_s, lidar_sigma_m,
                                                lidar_median_window, timeout_s, image_noise_sigma)

inline void to_json(json& j, const TickRecord& r) {
    j = json{{"tick", r.tick},       {"t", r.t},         {"phase", r.phase},
             {"state", r.state},     {"lidar_m", r.lidar_m}, {"pose", r.pose},
             {"command", r.command}, {"latency_ms", r.latency_ms}, {"overrun", r.overrun}};
}

}  // namespace padland
