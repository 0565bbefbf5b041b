// Marker assembly from classified shapes and pose estimation.
//
// Image coordinates: x right, y down, origin at the top-left pixel centre.
// Angles follow atan2 in those coordinates, so positive orientation is a
// clockwise rotation on screen.

#pragma once

#include "padland/shapes.hpp"

#include <optional>
#include <vector>

namespace padland {

enum class PoseSource { FullMarker, SmallCircleOnly };

std::string to_string(PoseSource s);

struct AssemblyParams {
    double low_altitude_cutoff_m = 0.35;  // SmallCircleOnly allowed below this
    double min_axis_ratio = 0.2;          // |rect - square| / circle diameter
    double max_axis_ratio = 0.8;
};

struct MarkerAssembly {
    PoseSource source = PoseSource::FullMarker;
    std::optional<ShapeDetection> large_circle;
    std::optional<ShapeDetection> square;
    std::optional<ShapeDetection> rectangle;
    std::optional<ShapeDetection> small_circle;
    std::optional<double> orientation_deg;  // FullMarker only
};

struct MarkerPose {
    Vec2 centre_px;
    Vec2 offset_px;  // centre_px - image centre
    Vec2 offset_cm;
    std::optional<double> orientation_deg;
    bool orientation_stale = false;  // carried over from an earlier full fix
    double altitude_m = 0.0;
    PoseSource source = PoseSource::FullMarker;
};

/// Wraps to (-180, 180].
double wrap_degrees(double deg);

/**
 * Direction square -> rectangle minus the nominal axis, wrapped. Returns nothing
 * if the centroid distance falls outside [min, max] x circle diameter.
 */
std::optional<double> orientation(const Vec2& square_c, const Vec2& rect_c, double circle_bbox_diameter,
                                  double nominal_axis_deg, const AssemblyParams& params = {});

/**
 * FullMarker needs a large circle containing exactly one square and exactly one
 * rectangle that pass the orientation gate; two candidates of either kind are
 * treated as ambiguous. Failing that, below the low-altitude cutoff a single
 * small-circle detection yields SmallCircleOnly.
 */
std::optional<MarkerAssembly> assemble(const std::vector<ShapeDetection>& detections, double altitude_m,
                                       const MarkerSpec& spec, const AssemblyParams& params = {});

/// Midpoint of the square and rectangle centroids, or the small-circle centroid.
Vec2 centre(const MarkerAssembly& assembly);

/// dx_cm = dx_px * altitude_m * 100 / focal_px (same for y).
Vec2 to_metric(const Vec2& offset_px, double altitude_m, const CameraModel& cam);

MarkerPose estimate_pose(const MarkerAssembly& assembly, double altitude_m, const CameraModel& cam);

}  // namespace padland
