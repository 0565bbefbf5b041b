// Marker geometry, pinhole scaling and altitude-gated shape classification.

#pragma once

#include "padland/ccl.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace padland {

struct Vec2 {
    double x = 0.0, y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/**
 * Physical layout of the landing marker, in metres. The large circle is a
 * black ring whose white interior holds the small circle (at the centre), the
 * square and the rectangle. Offsets are marker-frame vectors at orientation 0,
 * with the rectangle's long side perpendicular to the square->rectangle axis.
 */
struct MarkerSpec {
    double large_circle_outer_diameter = 0.40;
    double ring_thickness = 0.05;
    double small_circle_diameter = 0.05;
    double square_side = 0.06;
    double rect_width = 0.12;   // across the nominal axis
    double rect_height = 0.06;  // along the nominal axis
    Vec2 square_centre_offset{-0.09, 0.0};
    Vec2 rect_centre_offset{0.09, 0.0};
    double nominal_axis_deg = 0.0;
    double pad_side = 0.60;  // white board the marker is printed on

    double ring_inner_diameter() const { return large_circle_outer_diameter - 2.0 * ring_thickness; }
    double ring_area() const;
    double small_circle_area() const;
    double square_area() const { return square_side * square_side; }
    double rect_area() const { return rect_width * rect_height; }

    /// Throws ContractError naming the first violated invariant.
    void validate() const;
};

/// Nadir pinhole camera; the principal point is the image centre.
struct CameraModel {
    double focal_px = 645.0;
    int width = 1280;
    int height = 720;

    Vec2 principal_point() const { return {(width - 1) / 2.0, (height - 1) / 2.0}; }
    /// Ground distance covered by one pixel, metres.
    double ground_sampling_distance(double altitude_m) const { return altitude_m / focal_px; }
    void validate() const;
};

enum class ShapeClass { LargeCircle, SmallCircle, Square, Rectangle };
inline constexpr std::array<ShapeClass, 4> kAllShapeClasses{ShapeClass::LargeCircle, ShapeClass::SmallCircle,
                                                            ShapeClass::Square, ShapeClass::Rectangle};

std::string to_string(ShapeClass c);
ShapeClass parse_shape_class(const std::string& text);

struct ExpectedSizes {
    double altitude_m = 0.0;
    double scale_px_per_m = 0.0;
    double large_circle_diameter_px = 0.0;
    double large_circle_inner_diameter_px = 0.0;
    double large_circle_area_px = 0.0;  // ring area
    double small_circle_diameter_px = 0.0;
    double small_circle_area_px = 0.0;
    double square_side_px = 0.0;
    double square_area_px = 0.0;
    double rect_width_px = 0.0;
    double rect_height_px = 0.0;
    double rect_area_px = 0.0;

    double area(ShapeClass c) const;
};

/// size_px = focal_px * size_m / altitude_m. Altitude must exceed 0.05 m.
ExpectedSizes expected_sizes(const MarkerSpec& spec, const CameraModel& cam, double altitude_m);

/**
 * Sizes as they come out of the binarization chain: blur, the low threshold
 * and the opening pull every dark edge inward by roughly @p edge_shrink_px.
 */
ExpectedSizes apparent_sizes(const ExpectedSizes& expected, double edge_shrink_px);

struct Window {
    double lo = 0.0, hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct ToleranceProfile {
    double area_tolerance = 0.5;  // accept [1 - t, 1 + t] x expected area
    double max_aspect = 1.25;     // circles and square; the rectangle gets its own aspect times this
    Window ring_extent{0.05, 0.6};
    Window small_circle_extent{0.6, 0.9};
    Window square_extent{0.45, 1.0};
    Window rect_extent{0.35, 1.0};
    Window circle_diameter{0.7, 1.3};  // bbox diameter / expected diameter
    double ring_centre_offset = 0.05;  // centroid to bbox centre, fraction of the ring diameter
    double edge_shrink_px = 1.0;       // see apparent_sizes
    bool reject_border = true;         // interior figures touching the frame edge

    const Window& extent(ShapeClass c) const;
};

struct ShapeDetection {
    ShapeClass shape_class = ShapeClass::Square;
    ComponentRecord component;
    double expected_area = 0.0;
    double match_error = 0.0;  // |area / expected - 1|
};

double extent(const ComponentRecord& c);
double bbox_aspect(const ComponentRecord& c);

/// Best-matching class by relative area error among those whose gates pass.
std::optional<ShapeDetection> classify_component(const ComponentRecord& c, const ExpectedSizes& expected,
                                                 const ToleranceProfile& tol = {});

std::vector<ShapeDetection> classify_components(const std::vector<ComponentRecord>& components,
                                                const ExpectedSizes& expected, const ToleranceProfile& tol = {});

/// Detections whose whole bounding box lies inside the circle's bounding box.
std::vector<ShapeDetection> filter_inside(const ShapeDetection& circle, const std::vector<ShapeDetection>& others);

}  // namespace padland
