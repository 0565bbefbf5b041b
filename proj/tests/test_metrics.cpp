#include "padland/metrics.hpp"

#include <gtest/gtest.h>

using namespace padland;

namespace {

GroundTruth truth_at(double x, double y, double orientation = 0.0) {
    GroundTruth t;
    t.marker_present = true;
    t.marker_visible = true;
    t.centre_px = {x, y};
    t.orientation_deg = orientation;
    t.large_circle.bbox = {x - 50, y - 50, x + 50, y + 50};
    return t;
}

FrameOutcome fix_at(double x, double y, std::optional<double> orientation = 0.0,
                    PoseSource source = PoseSource::FullMarker) {
    MarkerPose p;
    p.centre_px = {x, y};
    p.orientation_deg = orientation;
    p.source = source;
    return {p, {}};
}

ShapeDetection shape_in_box(int x0, int y0, int x1, int y1) {
    ShapeDetection d;
    d.component.bbox = {x0, y0, x1, y1};
    return d;
}

}  // namespace

TEST(Metrics, FortyEightOfFifty) {
    std::vector<FrameOutcome> outcomes;
    std::vector<GroundTruth> truth;
    for (int i = 0; i < 50; ++i) {
        truth.push_back(truth_at(100, 100));
        outcomes.push_back(i < 48 ? fix_at(100, 100) : FrameOutcome{});
    }
    const auto m = evaluate(outcomes, truth);
    EXPECT_EQ(m.detected, 48);
    EXPECT_DOUBLE_EQ(m.detection_rate, 0.96);
}

TEST(Metrics, PerAxisMae) {
    const auto mae = per_axis_mae({{0.2, 0.6}, {0.18, 0.74}});
    EXPECT_NEAR(mae.x, 0.19, 1e-12);
    EXPECT_NEAR(mae.y, 0.67, 1e-12);
    const auto signs = per_axis_mae({{-0.2, 0.6}, {0.18, -0.74}});
    EXPECT_NEAR(signs.x, 0.19, 1e-12);
    EXPECT_EQ(per_axis_mae({}), (Vec2{0, 0}));
}

TEST(Metrics, PerfectDetections) {
    std::vector<FrameOutcome> outcomes{fix_at(10, 20, 30.0), fix_at(300, 200, -170.0)};
    const std::vector<GroundTruth> truth{truth_at(10, 20, 30.0), truth_at(300, 200, -170.0)};
    const auto m = evaluate(outcomes, truth);
    EXPECT_DOUBLE_EQ(m.detection_rate, 1.0);
    EXPECT_EQ(m.centre_mae_px, (Vec2{0, 0}));
    EXPECT_EQ(m.orientation_mae_deg, 0.0);
    EXPECT_EQ(m.false_fixes, 0);
}

TEST(Metrics, FarFixesAndMarkerFreeFixesAreFalse) {
    auto empty = truth_at(0, 0);
    empty.marker_present = false;
    const auto m = evaluate({fix_at(100, 100), fix_at(300, 300), fix_at(5, 5)},
                            {truth_at(100, 111), truth_at(300, 300), empty});
    EXPECT_EQ(m.marker_frames, 2);
    EXPECT_EQ(m.fixes, 3);
    EXPECT_EQ(m.detected, 1);
    EXPECT_EQ(m.false_fixes, 2);
}

TEST(Metrics, OrientationWrapsAndSkipsSmallCircleFixes) {
    EXPECT_DOUBLE_EQ(angle_error_deg(179.0, -179.0), 2.0);
    const auto m = evaluate({fix_at(0, 0, 179.0), fix_at(0, 0, std::nullopt, PoseSource::SmallCircleOnly)},
                            {truth_at(0, 0, -179.0), truth_at(0, 0, 40.0)});
    EXPECT_EQ(m.orientation_frames, 1);
    EXPECT_DOUBLE_EQ(m.orientation_mae_deg, 2.0);
}

TEST(Metrics, FalseShapesAreOutsideTheRing) {
    const auto t = truth_at(100, 100);
    EXPECT_FALSE(is_false_shape(shape_in_box(60, 60, 140, 140), t));
    EXPECT_FALSE(is_false_shape(shape_in_box(49, 49, 151, 151), t));  // within the 2 px margin
    EXPECT_TRUE(is_false_shape(shape_in_box(40, 60, 80, 80), t));
    auto none = t;
    none.marker_present = false;
    EXPECT_TRUE(is_false_shape(shape_in_box(60, 60, 140, 140), none));
    FrameOutcome o;
    o.detections = {shape_in_box(60, 60, 70, 70), shape_in_box(0, 0, 5, 5)};
    EXPECT_EQ(evaluate({o}, {t}).false_shapes, 1);
}

TEST(Metrics, SizeMismatchIsAContractError) {
    EXPECT_THROW(evaluate({FrameOutcome{}}, {}), ContractError);
}
