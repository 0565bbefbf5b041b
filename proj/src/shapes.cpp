#include "padland/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace padland {

double MarkerSpec::ring_area() const {
    const double d_in = ring_inner_diameter();
    return std::numbers::pi / 4.0 *
           (large_circle_outer_diameter * large_circle_outer_diameter - d_in * d_in);
}

double MarkerSpec::small_circle_area() const {
    return std::numbers::pi / 4.0 * small_circle_diameter * small_circle_diameter;
}

namespace {

// Farthest corner of an axis-aligned (in the marker frame) box from the centre.
double farthest_corner(const Vec2& centre, double half_w, double half_h) {
    return std::hypot(std::abs(centre.x) + half_w, std::abs(centre.y) + half_h);
}

}  // namespace

void MarkerSpec::validate() const {
    const double dims[] = {large_circle_outer_diameter, ring_thickness, small_circle_diameter,
                           square_side, rect_width, rect_height, pad_side};
    for (double d : dims) {
        if (!(d > 0.0)) throw ContractError("MarkerSpec: all dimensions must be positive");
    }
    if (2.0 * ring_thickness >= large_circle_outer_diameter) {
        throw ContractError("MarkerSpec: ring thickness leaves no interior");
    }
    const double ratio = std::max(rect_area(), square_area()) / std::min(rect_area(), square_area());
    if (ratio < 1.3) {
        throw ContractError("MarkerSpec: rectangle and square areas must differ by at least 30%");
    }
    const double inner_r = ring_inner_diameter() / 2.0;
    // Rectangle long side runs across the nominal axis: in the marker frame its
    // x half-extent is rect_height/2 and its y half-extent rect_width/2.
    if (farthest_corner(square_centre_offset, square_side / 2, square_side / 2) >= inner_r ||
        farthest_corner(rect_centre_offset, rect_height / 2, rect_width / 2) >= inner_r) {
        throw ContractError("MarkerSpec: square and rectangle must fit inside the ring interior");
    }
    if (small_circle_diameter / 2.0 >= inner_r) throw ContractError("MarkerSpec: small circle too large");
    if (pad_side < large_circle_outer_diameter) throw ContractError("MarkerSpec: pad smaller than the ring");
}

void CameraModel::validate() const {
    if (!(focal_px > 0.0)) throw ContractError("CameraModel: focal_px must be positive");
    if (width <= 0 || height <= 0) throw ContractError("CameraModel: image size must be positive");
}

std::string to_string(ShapeClass c) {
    switch (c) {
        case ShapeClass::LargeCircle: return "large_circle";
        case ShapeClass::SmallCircle: return "small_circle";
        case ShapeClass::Square: return "square";
        case ShapeClass::Rectangle: return "rectangle";
    }
    return "?";
}

ShapeClass parse_shape_class(const std::string& text) {
    for (auto c : kAllShapeClasses) {
        if (to_string(c) == text) return c;
    }
    throw ContractError("unknown shape class '" + text + "'");
}

double ExpectedSizes::area(ShapeClass c) const {
    switch (c) {
        case ShapeClass::LargeCircle: return large_circle_area_px;
        case ShapeClass::SmallCircle: return small_circle_area_px;
        case ShapeClass::Square: return square_area_px;
        case ShapeClass::Rectangle: return rect_area_px;
    }
    return 0.0;
}

ExpectedSizes expected_sizes(const MarkerSpec& spec, const CameraModel& cam, double altitude_m) {
    if (!(altitude_m > 0.05)) throw ContractError("expected_sizes: altitude must exceed 0.05 m");
    cam.validate();
    const double s = cam.focal_px / altitude_m;
    ExpectedSizes e;
    e.altitude_m = altitude_m;
    e.scale_px_per_m = s;
    e.large_circle_diameter_px = spec.large_circle_outer_diameter * s;
    e.large_circle_inner_diameter_px = spec.ring_inner_diameter() * s;
    e.large_circle_area_px = spec.ring_area() * s * s;
    e.small_circle_diameter_px = spec.small_circle_diameter * s;
    e.small_circle_area_px = spec.small_circle_area() * s * s;
    e.square_side_px = spec.square_side * s;
    e.square_area_px = spec.square_area() * s * s;
    e.rect_width_px = spec.rect_width * s;
    e.rect_height_px = spec.rect_height * s;
    e.rect_area_px = spec.rect_area() * s * s;
    return e;
}

ExpectedSizes apparent_sizes(const ExpectedSizes& expected, double edge_shrink_px) {
    if (!(edge_shrink_px >= 0.0)) throw ContractError("apparent_sizes: shrink must be non-negative");
    const double d = 2.0 * edge_shrink_px;
    auto shrink = [d](double v) { return std::max(v - d, 1.0); };
    ExpectedSizes a = expected;
    a.large_circle_diameter_px = shrink(expected.large_circle_diameter_px);
    a.large_circle_inner_diameter_px = std::min(expected.large_circle_inner_diameter_px + d, a.large_circle_diameter_px);
    a.large_circle_area_px = std::max(std::numbers::pi / 4.0 *
                                          (a.large_circle_diameter_px * a.large_circle_diameter_px -
                                           a.large_circle_inner_diameter_px * a.large_circle_inner_diameter_px),
                                      1.0);
    a.small_circle_diameter_px = shrink(expected.small_circle_diameter_px);
    a.small_circle_area_px = std::numbers::pi / 4.0 * a.small_circle_diameter_px * a.small_circle_diameter_px;
    a.square_side_px = shrink(expected.square_side_px);
    a.square_area_px = a.square_side_px * a.square_side_px;
    a.rect_width_px = shrink(expected.rect_width_px);
    a.rect_height_px = shrink(expected.rect_height_px);
    a.rect_area_px = a.rect_width_px * a.rect_height_px;
    return a;
}

const Window& ToleranceProfile::extent(ShapeClass c) const {
    switch (c) {
        case ShapeClass::LargeCircle: return ring_extent;
        case ShapeClass::SmallCircle: return small_circle_extent;
        case ShapeClass::Square: return square_extent;
        case ShapeClass::Rectangle: return rect_extent;
    }
    return rect_extent;
}

double extent(const ComponentRecord& c) {
    return static_cast<double>(c.area) / static_cast<double>(c.bbox.area());
}

double bbox_aspect(const ComponentRecord& c) {
    const double w = c.bbox.width(), h = c.bbox.height();
    return std::max(w, h) / std::min(w, h);
}

std::optional<ShapeDetection> classify_component(const ComponentRecord& c, const ExpectedSizes& expected,
                                                 const ToleranceProfile& tol) {
    std::optional<ShapeDetection> best;
    const double ext = extent(c);
    const double aspect = bbox_aspect(c);
    const double diameter = std::max(c.bbox.width(), c.bbox.height());

    for (auto cls : kAllShapeClasses) {
        const double want = expected.area(cls);
        if (!(want > 0.0)) continue;
        // A truncated interior figure has an unknown size. The ring is exempt:
        // it may be clipped close to the pad while the figures inside are whole.
        if (tol.reject_border && c.touches_border && cls != ShapeClass::LargeCircle) continue;
        const double ratio = static_cast<double>(c.area) / want;
        if (ratio < 1.0 - tol.area_tolerance || ratio > 1.0 + tol.area_tolerance) continue;
        if (cls == ShapeClass::Rectangle) {
            // Any rotation keeps the bounding box no more elongated than the figure.
            const double rect_aspect = std::max(expected.rect_width_px, expected.rect_height_px) /
                                       std::min(expected.rect_width_px, expected.rect_height_px);
            if (aspect > rect_aspect * tol.max_aspect) continue;
        } else if (aspect > tol.max_aspect) {
            continue;
        }
        if (!tol.extent(cls).contains(ext)) continue;
        if (cls == ShapeClass::LargeCircle && !c.touches_border) {
            // A whole ring is centrally symmetric; an arc left over from a broken
            // ring has its mass well off the middle of its box.
            const double bx = (c.bbox.min_x + c.bbox.max_x) / 2.0, by = (c.bbox.min_y + c.bbox.max_y) / 2.0;
            if (std::hypot(c.cx - bx, c.cy - by) > tol.ring_centre_offset * diameter) continue;
        }
        if (cls == ShapeClass::LargeCircle || cls == ShapeClass::SmallCircle) {
            const double want_d = cls == ShapeClass::LargeCircle ? expected.large_circle_diameter_px
                                                                 : expected.small_circle_diameter_px;
            if (!tol.circle_diameter.contains(diameter / want_d)) continue;
        }
        const double err = std::abs(ratio - 1.0);
        if (!best || err < best->match_error) best = ShapeDetection{cls, c, want, err};
    }
    return best;
}

std::vector<ShapeDetection> classify_components(const std::vector<ComponentRecord>& components,
                                                const ExpectedSizes& expected, const ToleranceProfile& tol) {
    std::vector<ShapeDetection> out;
    for (const auto& c : components) {
        if (auto d = classify_component(c, expected, tol)) out.push_back(*d);
    }
    return out;
}

std::vector<ShapeDetection> filter_inside(const ShapeDetection& circle, const std::vector<ShapeDetection>& others) {
    std::vector<ShapeDetection> out;
    for (const auto& d : others) {
        if (d.component.label == circle.component.label && d.component.bbox == circle.component.bbox) continue;
        if (circle.component.bbox.contains(d.component.bbox)) out.push_back(d);
    }
    return out;
}

}  // namespace padland
