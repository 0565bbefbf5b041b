#include "padland/marker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace padland {

std::string to_string(PoseSource s) {
    return s == PoseSource::FullMarker ? "full_marker" : "small_circle_only";
}

double wrap_degrees(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0) r += 360.0;
    if (r > 180.0) r -= 360.0;
    return r;
}

std::optional<double> orientation(const Vec2& square_c, const Vec2& rect_c, double circle_bbox_diameter,
                                  double nominal_axis_deg, const AssemblyParams& params) {
    const double dx = rect_c.x - square_c.x;
    const double dy = rect_c.y - square_c.y;
    const double dist = std::hypot(dx, dy);
    if (dist < params.min_axis_ratio * circle_bbox_diameter || dist > params.max_axis_ratio * circle_bbox_diameter) {
        return std::nullopt;
    }
    const double deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    return wrap_degrees(deg - nominal_axis_deg);
}

namespace {

Vec2 centroid(const ShapeDetection& d) { return {d.component.cx, d.component.cy}; }

std::optional<MarkerAssembly> try_circle(const ShapeDetection& circle, const std::vector<ShapeDetection>& all,
                                         const MarkerSpec& spec, const AssemblyParams& params) {
    const auto inside = filter_inside(circle, all);
    std::vector<const ShapeDetection*> squares, rects, smalls;
    for (const auto& d : inside) {
        switch (d.shape_class) {
            case ShapeClass::Square: squares.push_back(&d); break;
            case ShapeClass::Rectangle: rects.push_back(&d); break;
            case ShapeClass::SmallCircle: smalls.push_back(&d); break;
            case ShapeClass::LargeCircle: break;
        }
    }
    if (squares.size() != 1 || rects.size() != 1) return std::nullopt;

    const double diameter = std::max(circle.component.bbox.width(), circle.component.bbox.height());
    const auto angle = orientation(centroid(*squares[0]), centroid(*rects[0]), diameter, spec.nominal_axis_deg, params);
    if (!angle) return std::nullopt;

    MarkerAssembly a;
    a.source = PoseSource::FullMarker;
    a.large_circle = circle;
    a.square = *squares[0];
    a.rectangle = *rects[0];
    if (smalls.size() == 1) a.small_circle = *smalls[0];
    a.orientation_deg = angle;
    return a;
}

}  // namespace

std::optional<MarkerAssembly> assemble(const std::vector<ShapeDetection>& detections, double altitude_m,
                                       const MarkerSpec& spec, const AssemblyParams& params) {
    std::optional<MarkerAssembly> best;
    for (const auto& d : detections) {
        if (d.shape_class != ShapeClass::LargeCircle) continue;
        auto candidate = try_circle(d, detections, spec, params);
        if (candidate && (!best || candidate->large_circle->match_error < best->large_circle->match_error)) {
            best = std::move(candidate);
        }
    }
    if (best) return best;

    // Close to the pad the ring no longer fits in the frame, and whatever still
    // passes as a large circle cannot be assembled; only the small circle counts.
    if (altitude_m < params.low_altitude_cutoff_m) {
        const ShapeDetection* lone = nullptr;
        int count = 0;
        for (const auto& d : detections) {
            if (d.shape_class == ShapeClass::SmallCircle) {
                lone = &d;
                ++count;
            }
        }
        if (count == 1) {
            MarkerAssembly a;
            a.source = PoseSource::SmallCircleOnly;
            a.small_circle = *lone;
            return a;
        }
    }
    return std::nullopt;
}

Vec2 centre(const MarkerAssembly& assembly) {
    if (assembly.source == PoseSource::SmallCircleOnly) {
        if (!assembly.small_circle) throw ContractError("centre: SmallCircleOnly assembly without a small circle");
        return centroid(*assembly.small_circle);
    }
    if (!assembly.square || !assembly.rectangle) {
        throw ContractError("centre: FullMarker assembly needs a square and a rectangle");
    }
    const Vec2 s = centroid(*assembly.square), r = centroid(*assembly.rectangle);
    return {(s.x + r.x) / 2.0, (s.y + r.y) / 2.0};
}

Vec2 to_metric(const Vec2& offset_px, double altitude_m, const CameraModel& cam) {
    if (!(altitude_m > 0.0)) throw ContractError("to_metric: altitude must be positive");
    cam.validate();
    const double cm_per_px = altitude_m * 100.0 / cam.focal_px;
    return {offset_px.x * cm_per_px, offset_px.y * cm_per_px};
}

MarkerPose estimate_pose(const MarkerAssembly& assembly, double altitude_m, const CameraModel& cam) {
    MarkerPose pose;
    pose.source = assembly.source;
    pose.altitude_m = altitude_m;
    pose.centre_px = centre(assembly);
    const Vec2 pp = cam.principal_point();
    pose.offset_px = {pose.centre_px.x - pp.x, pose.centre_px.y - pp.y};
    pose.offset_cm = to_metric(pose.offset_px, altitude_m, cam);
    pose.orientation_deg = assembly.orientation_deg;
    return pose;
}

}  // namespace padland
