#include "padland/imgio.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

namespace fs = std::filesystem;
using namespace padland;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("padland_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Pnm, RoundTripRgbAndGrey) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> v(0, 255);
    for (auto kind : {PixelKind::RGB, PixelKind::Grey}) {
        Frame f(17, 9, kind);
        for (auto& b : f.data()) b = static_cast<std::uint8_t>(v(rng));
        const auto encoded = write_pnm(f);
        EXPECT_TRUE(read_pnm(encoded).same_pixels(f));
        EXPECT_EQ(write_pnm(read_pnm(encoded)), encoded);
    }
}

TEST(Pnm, CanonicalHeader) {
    Frame f(3, 2, PixelKind::Grey);
    const auto out = write_pnm(f);
    EXPECT_EQ(std::string(out.begin(), out.begin() + 11), "P5\n3 2\n255\n");
    EXPECT_EQ(out.size(), 11u + 6u);
}

TEST(Pnm, SkipsComments) {
    const auto f = read_pnm(bytes("P5\n# made by hand\n2 1 # trailing\n255\n\x01\x02"));
    EXPECT_EQ(f.width(), 2);
    EXPECT_EQ(f.at(0, 0), 1);
    EXPECT_EQ(f.at(1, 0), 2);
}

TEST(Pnm, BinaryWritesAsGrey) {
    Frame b(2, 1, PixelKind::Binary);
    b.at(1, 0) = 255;
    const auto back = read_pnm(write_pnm(b));
    EXPECT_EQ(back.kind(), PixelKind::Grey);
    EXPECT_EQ(back.at(1, 0), 255);
}

TEST(Pnm, DecodeErrorsCarryOffsets) {
    try {
        read_pnm(bytes("P5\n4 4\n255\n\x01\x02"));
        FAIL() << "truncated raster accepted";
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.offset(), 13u);
    }
    EXPECT_THROW(read_pnm(bytes("P3\n1 1\n255\n0 0 0")), DecodeError);
    EXPECT_THROW(read_pnm(bytes(std::string("P5\n1 1\n65535\n\0\0", 15))), DecodeError);
    EXPECT_THROW(read_pnm(bytes("P6\n0 1\n255\n")), DecodeError);
    EXPECT_THROW(read_pnm(bytes("")), DecodeError);
}

TEST(Pnm, FileHelpers) {
    const auto dir = scratch_dir("pnm");
    Frame f(4, 4, PixelKind::RGB);
    f.at(2, 1, 1) = 77;
    save_pnm(f, dir / "a.ppm");
    EXPECT_TRUE(load_pnm(dir / "a.ppm").same_pixels(f));
    EXPECT_THROW(load_pnm(dir / "missing.ppm"), IoError);
}

TEST(Sequence, NamesAndListing) {
    EXPECT_EQ(sequence_frame_name(42), "frame_000042.ppm");
    const auto dir = scratch_dir("seq");
    Frame f(2, 2, PixelKind::Grey);
    for (int i : {3, 1, 2}) save_pnm(f, dir / sequence_frame_name(i));
    save_pnm(f, dir / "other.ppm");
    EXPECT_EQ(list_sequence_frames(dir), (std::vector<std::int64_t>{1, 2, 3}));
    EXPECT_EQ(sequence_frame_path(dir, 2).filename(), "frame_000002.ppm");
}

TEST(Sequence, AltitudeLogRoundTrip) {
    const auto dir = scratch_dir("alt");
    const std::map<std::int64_t, double> alts{{0, 1.5}, {1, 1.25}, {7, 0.3}};
    write_altitude_log(dir / "altitude.csv", alts);
    EXPECT_EQ(read_altitude_log(dir / "altitude.csv"), alts);
    EXPECT_THROW(read_altitude_log(dir / "none.csv"), IoError);
}

TEST(Annotate, DrawsColouredOverlaysAndClips) {
    Frame grey(20, 20, PixelKind::Grey);
    const std::vector<Overlay> overlays{
        {BoxOverlay{2, 2, 6, 6}, colors::kGreen},
        {PointOverlay{10, 10}, colors::kRed},
        {LineOverlay{0, 19, 19, 19}, colors::kOrange},
        {BoxOverlay{-5, -5, 30, 30}, colors::kBlue},  // edges fall outside the frame
    };
    const auto out = annotate(grey, overlays);
    ASSERT_EQ(out.kind(), PixelKind::RGB);
    EXPECT_EQ(out.at(2, 4, 1), 255);  // box edge, green
    EXPECT_EQ(out.at(4, 4, 1), 0);    // box interior untouched
    EXPECT_EQ(out.at(11, 11, 0), 255);  // 3x3 point
    EXPECT_EQ(out.at(12, 12, 0), 0);
    EXPECT_EQ(out.at(5, 19, 0), 255);  // line
    EXPECT_EQ(out.at(5, 19, 1), 165);
}
