#include "padland/shapes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace padland;

namespace {

ComponentRecord component(std::int64_t area, int w, int h, bool border = false) {
    ComponentRecord c;
    c.label = 1;
    c.area = area;
    c.bbox = {100, 100, 100 + w - 1, 100 + h - 1};
    c.cx = 100 + (w - 1) / 2.0;
    c.cy = 100 + (h - 1) / 2.0;
    c.touches_border = border;
    return c;
}

}  // namespace

TEST(ExpectedSizes, PinholeScale) {
    const MarkerSpec spec;
    const CameraModel cam;  // 645 px focal length
    EXPECT_NEAR(expected_sizes(spec, cam, 1.0).large_circle_diameter_px, 258.0, 1e-9);
    EXPECT_NEAR(expected_sizes(spec, cam, 2.0).large_circle_diameter_px, 129.0, 1e-9);

    MarkerSpec eight_cm = spec;
    eight_cm.square_side = 0.08;
    EXPECT_NEAR(expected_sizes(eight_cm, cam, 0.5).square_side_px, 103.2, 1e-9);
}

TEST(ExpectedSizes, InverseInAltitudeAreasInverseSquare) {
    const MarkerSpec spec;
    const CameraModel cam;
    const auto a = expected_sizes(spec, cam, 0.7), b = expected_sizes(spec, cam, 1.4);
    for (auto c : kAllShapeClasses) EXPECT_NEAR(a.area(c), 4.0 * b.area(c), 1e-6);
    EXPECT_NEAR(a.square_side_px, 2.0 * b.square_side_px, 1e-9);
    EXPECT_THROW(expected_sizes(spec, cam, 0.0), ContractError);
}

TEST(MarkerSpecCheck, DefaultsValidAndEightCentimetreSquareRejected) {
    EXPECT_NO_THROW(MarkerSpec{}.validate());
    MarkerSpec s;
    s.square_side = 0.08;  // 64 cm^2 against a 72 cm^2 rectangle: under 30% apart
    EXPECT_THROW(s.validate(), ContractError);
    MarkerSpec fat;
    fat.ring_thickness = 0.2;
    EXPECT_THROW(fat.validate(), ContractError);
}

TEST(ApparentSizes, ShrinksFiguresGrowsRingHole) {
    const auto e = expected_sizes(MarkerSpec{}, CameraModel{}, 1.0);
    const auto a = apparent_sizes(e, 1.0);
    EXPECT_NEAR(a.large_circle_diameter_px, e.large_circle_diameter_px - 2.0, 1e-9);
    EXPECT_NEAR(a.large_circle_inner_diameter_px, e.large_circle_inner_diameter_px + 2.0, 1e-9);
    EXPECT_NEAR(a.square_area_px, (e.square_side_px - 2.0) * (e.square_side_px - 2.0), 1e-9);
    EXPECT_LT(a.rect_area_px, e.rect_area_px);
    const auto zero = apparent_sizes(e, 0.0);
    EXPECT_NEAR(zero.large_circle_area_px, e.large_circle_area_px, 1e-6 * e.large_circle_area_px);
    EXPECT_THROW(apparent_sizes(e, -1.0), ContractError);
}

TEST(Classify, IdealFiguresGetTheirClass) {
    const auto e = expected_sizes(MarkerSpec{}, CameraModel{}, 1.0);
    const int sq = static_cast<int>(std::lround(e.square_side_px));
    const auto square = classify_component(component(static_cast<std::int64_t>(sq) * sq, sq, sq), e);
    ASSERT_TRUE(square);
    EXPECT_EQ(square->shape_class, ShapeClass::Square);

    const int rw = static_cast<int>(std::lround(e.rect_width_px)), rh = static_cast<int>(std::lround(e.rect_height_px));
    const auto rect = classify_component(component(static_cast<std::int64_t>(rw) * rh, rw, rh), e);
    ASSERT_TRUE(rect);
    EXPECT_EQ(rect->shape_class, ShapeClass::Rectangle);

    const int d = static_cast<int>(std::lround(e.small_circle_diameter_px));
    const auto disc = classify_component(component(std::llround(e.small_circle_area_px), d, d), e);
    ASSERT_TRUE(disc);
    EXPECT_EQ(disc->shape_class, ShapeClass::SmallCircle);

    const int D = static_cast<int>(std::lround(e.large_circle_diameter_px));
    const auto ring = classify_component(component(std::llround(e.large_circle_area_px), D, D), e);
    ASSERT_TRUE(ring);
    EXPECT_EQ(ring->shape_class, ShapeClass::LargeCircle);
}

TEST(Classify, RejectsWrongSizeShapeAndBorderFigures) {
    const auto e = expected_sizes(MarkerSpec{}, CameraModel{}, 1.0);
    const int sq = static_cast<int>(std::lround(e.square_side_px));
    EXPECT_FALSE(classify_component(component(4L * sq * sq, 2 * sq, 2 * sq), e));  // four times too big
    EXPECT_FALSE(classify_component(component(static_cast<std::int64_t>(sq) * sq, sq * 3, sq / 3), e));  // sliver
    EXPECT_FALSE(classify_component(component(static_cast<std::int64_t>(sq) * sq, sq, sq, true), e));
    ToleranceProfile lax;
    lax.reject_border = false;
    EXPECT_TRUE(classify_component(component(static_cast<std::int64_t>(sq) * sq, sq, sq, true), e, lax));
}

TEST(Classify, FilterInsideKeepsContainedOnly) {
    ShapeDetection circle{ShapeClass::LargeCircle, component(1000, 200, 200), 1000, 0};
    circle.component.label = 1;
    ShapeDetection in{ShapeClass::Square, component(100, 10, 10), 100, 0};
    in.component.label = 2;
    ShapeDetection out = in;
    out.component.label = 3;
    out.component.bbox = {90, 90, 99, 99};
    const auto kept = filter_inside(circle, {circle, in, out});
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].component.label, 2);
}

TEST(ShapeNames, RoundTrip) {
    for (auto c : kAllShapeClasses) EXPECT_EQ(parse_shape_class(to_string(c)), c);
    EXPECT_THROW(parse_shape_class("triangle"), ContractError);
}

TEST(Classify, LopsidedRingIsNotALargeCircle) {
    const auto e = expected_sizes(MarkerSpec{}, CameraModel{}, 1.0);
    const int D = static_cast<int>(std::lround(e.large_circle_diameter_px));
    auto arc = component(std::llround(e.large_circle_area_px), D, D);
    arc.cx += 0.1 * D;
    EXPECT_FALSE(classify_component(arc, e));
    arc.touches_border = true;  // a ring clipped by the frame edge is lopsided too, and allowed
    EXPECT_TRUE(classify_component(arc, e));
}
