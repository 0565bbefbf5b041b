#include "oracles.hpp"
#include "padland/ccl.hpp"

#include <gtest/gtest.h>

using namespace padland;

namespace {

Frame from_rows(const std::vector<std::string>& rows) {
    Frame f(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), PixelKind::Binary);
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) f.at(x, y) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#' ? 255 : 0;
    }
    return f;
}

}  // namespace

TEST(Labeling, DiagonalDependsOnConnectivity) {
    const auto f = from_rows({"#.", ".#"});
    EXPECT_EQ(label_components(f, Connectivity::Four).components.size(), 2u);
    EXPECT_EQ(label_components(f, Connectivity::Eight).components.size(), 1u);
}

TEST(Labeling, UShapeMergesLate) {
    // Two arms only join on the last row: the union has to fold statistics.
    const auto f = from_rows({"#...#", "#...#", "#####"});
    const auto r = label_components(f, Connectivity::Four);
    ASSERT_EQ(r.components.size(), 1u);
    const auto& c = r.components[0];
    EXPECT_EQ(c.area, 9);
    EXPECT_EQ(c.bbox, (BoundingBox{0, 0, 4, 2}));
    EXPECT_DOUBLE_EQ(c.cx, 2.0);
    EXPECT_DOUBLE_EQ(c.cy, (0 + 0 + 1 + 1 + 5 * 2) / 9.0);
    EXPECT_TRUE(c.touches_border);
}

TEST(Labeling, OrderedByAreaThenPosition) {
    const auto f = from_rows({"#..##", "...##", "#...."});
    const auto r = label_components(f, Connectivity::Eight, true);
    ASSERT_EQ(r.components.size(), 3u);
    EXPECT_EQ(r.components[0].area, 4);
    EXPECT_EQ(r.components[1].bbox.min_y, 0);
    EXPECT_EQ(r.components[2].bbox.min_y, 2);
    for (std::size_t i = 0; i < r.components.size(); ++i) EXPECT_EQ(r.components[i].label, static_cast<int>(i) + 1);
    EXPECT_EQ(r.label_map[3], 1);
}

TEST(Labeling, EmptyAndFullFrames) {
    Frame empty(7, 3, PixelKind::Binary);
    EXPECT_TRUE(label_components(empty).components.empty());
    Frame full(7, 3, PixelKind::Binary);
    for (auto& v : full.data()) v = 255;
    const auto r = label_components(full);
    ASSERT_EQ(r.components.size(), 1u);
    EXPECT_EQ(r.components[0].area, 21);
}

TEST(Labeling, InteriorComponentDoesNotTouchBorder) {
    const auto f = from_rows({".....", ".##..", "....."});
    EXPECT_FALSE(label_components(f).components[0].touches_border);
}

TEST(Labeling, MatchesFloodFillOnRandomImages) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 1 + trial % 31, h = 1 + (trial * 5) % 23;
        const auto f = oracle::random_binary(w, h, 0.2 + 0.05 * (trial % 12), rng);
        for (int conn : {4, 8}) {
            const auto r = label_components(f, parse_connectivity(conn), true);
            EXPECT_EQ(oracle::compare_labeling(f, conn, r), "") << "trial " << trial << " conn " << conn;
        }
    }
}

TEST(Labeling, Contracts) {
    EXPECT_THROW(label_components(Frame(3, 3, PixelKind::Grey)), ContractError);
    EXPECT_THROW(parse_connectivity(6), ContractError);
}
