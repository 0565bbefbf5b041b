#include "oracles.hpp"
#include "padland/preprocess.hpp"

#include <gtest/gtest.h>

using namespace padland;

TEST(Greyscale, WeightedLumaRoundedHalfUp) {
    Frame rgb(4, 1, PixelKind::RGB);
    const std::uint8_t px[4][3] = {{255, 255, 255}, {255, 0, 0}, {0, 255, 0}, {10, 20, 30}};
    for (int x = 0; x < 4; ++x) {
        for (int c = 0; c < 3; ++c) rgb.at(x, 0, c) = px[x][c];
    }
    const auto g = to_greyscale(rgb);
    EXPECT_EQ(g.at(0, 0), 255);
    EXPECT_EQ(g.at(1, 0), 76);   // 76.245
    EXPECT_EQ(g.at(2, 0), 150);  // 149.685
    EXPECT_EQ(g.at(3, 0), 18);   // 18.15
    EXPECT_THROW(to_greyscale(g), ContractError);
}

TEST(Gaussian, MatchesDirectConvolution) {
    std::mt19937_64 rng(11);
    for (auto [w, h] : {std::pair{1, 1}, {3, 2}, {7, 5}, {64, 48}}) {
        const auto g = oracle::random_grey(w, h, rng);
        EXPECT_TRUE(gaussian_5x5(g).same_pixels(oracle::brute_gaussian(g))) << w << "x" << h;
    }
}

TEST(Gaussian, ConstantImageIsFixed) {
    Frame g(9, 9, PixelKind::Grey);
    for (auto& v : g.data()) v = 173;
    EXPECT_TRUE(gaussian_5x5(g).same_pixels(g));
}

TEST(Morphology, MatchesDefinitions) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 1 + trial % 13, h = 1 + (trial * 7) % 11;
        const auto b = oracle::random_binary(w, h, 0.3 + 0.4 * (trial % 3) / 2.0, rng);
        EXPECT_TRUE(erode_3x3(b).same_pixels(oracle::brute_vote(b, 1, 9, false)));
        EXPECT_TRUE(dilate_3x3(b).same_pixels(oracle::brute_vote(b, 1, 1, false)));
        EXPECT_TRUE(median_5x5(b).same_pixels(oracle::brute_vote(b, 2, 13, true)));
    }
}

TEST(Morphology, ErosionShrinksDilationGrows) {
    std::mt19937_64 rng(8);
    const auto b = oracle::random_binary(50, 40, 0.6, rng);
    const auto e = erode_3x3(b), d = dilate_3x3(b);
    for (std::size_t i = 0; i < b.pixel_count(); ++i) {
        EXPECT_LE(e.data()[i], b.data()[i]);
        EXPECT_GE(d.data()[i], b.data()[i]);
    }
}

TEST(Morphology, BorderIsBackgroundForErosion) {
    Frame b(5, 5, PixelKind::Binary);
    for (auto& v : b.data()) v = 255;
    const auto e = erode_3x3(b);
    EXPECT_EQ(e.at(0, 2), 0);
    EXPECT_EQ(e.at(2, 2), 255);
    // The majority filter replicates the edge, so a full frame stays full.
    EXPECT_TRUE(median_5x5(b).same_pixels(b));
}

TEST(Morphology, RejectsWrongKind) {
    Frame g(3, 3, PixelKind::Grey);
    EXPECT_THROW(erode_3x3(g), ContractError);
    EXPECT_THROW(median_5x5(g), ContractError);
    EXPECT_THROW(dilate_3x3(g), ContractError);
}
