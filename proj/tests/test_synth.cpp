#include "padland/imgio.hpp"
#include "padland/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

namespace fs = std::filesystem;
using namespace padland;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("padland_synth_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Render, Deterministic) {
    ScenePose pose;
    pose.altitude = 0.9;
    pose.yaw_deg = 33;
    pose.noise_sigma = 3.0;
    pose.background.kind = Background::Kind::Texture;
    const MarkerSpec spec;
    const CameraModel cam;
    const auto a = render(spec, cam, pose, 42), b = render(spec, cam, pose, 42), c = render(spec, cam, pose, 43);
    EXPECT_TRUE(a.frame.same_pixels(b.frame));
    EXPECT_FALSE(a.frame.same_pixels(c.frame));
    EXPECT_EQ(a.frame.kind(), PixelKind::RGB);
}

TEST(Render, CentredTruthAtImageCentre) {
    ScenePose pose;
    const auto r = render(MarkerSpec{}, CameraModel{}, pose, 1);
    EXPECT_NEAR(r.truth.centre_px.x, 639.5, 0.5);
    EXPECT_NEAR(r.truth.centre_px.y, 359.5, 0.5);
    EXPECT_TRUE(r.truth.marker_visible);
    EXPECT_DOUBLE_EQ(r.truth.orientation_deg, 0.0);
}

TEST(Render, MirrorSymmetricAtZeroYaw) {
    ScenePose pose;
    const auto r = render(MarkerSpec{}, CameraModel{}, pose, 1);
    const auto& f = r.frame;
    int worst = 0;
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            worst = std::max(worst, std::abs(f.at(x, y) - f.at(x, f.height() - 1 - y)));
        }
    }
    EXPECT_LE(worst, 1);
}

TEST(Render, MeasuredRingDiameter) {
    ScenePose pose;
    pose.altitude = 1.0;
    const auto r = render(MarkerSpec{}, CameraModel{}, pose, 1);
    // Sample the vertical axis through the centre (the figures lie on the
    // horizontal one), inside the white board only. Samples below the half-way
    // level between ink and white are the ring and the small circle.
    const auto& f = r.frame;
    const int x = 640;
    int first = -1, last = -1;
    for (int y = 360 - 180; y < 360 + 180; ++y) {
        if ((f.at(x, y, 0) + f.at(x - 1, y, 0)) / 2 < 120) {
            if (first < 0) first = y;
            last = y;
        }
    }
    EXPECT_NEAR(last - first + 1, 258.0, 2.0);
}

TEST(Render, CentreMovesAgainstPosition) {
    const MarkerSpec spec;
    const CameraModel cam;
    for (double alt : {0.8, 1.0, 1.3}) {
        ScenePose a;
        a.altitude = alt;
        ScenePose bx = a, by = a;
        const double h = 0.01;
        bx.x += h;
        by.y += h;
        const auto t0 = scene_truth(spec, cam, a), tx = scene_truth(spec, cam, bx), ty = scene_truth(spec, cam, by);
        EXPECT_NEAR((tx.centre_px.x - t0.centre_px.x) / h, -cam.focal_px / alt, 1e-6);
        EXPECT_NEAR((ty.centre_px.y - t0.centre_px.y) / h, -cam.focal_px / alt, 1e-6);
        EXPECT_NEAR(tx.centre_px.y, t0.centre_px.y, 1e-9);
    }
}

TEST(Render, MarkerOutOfViewIsNotVisible) {
    ScenePose pose;
    pose.x = 20.0;
    const auto r = render(MarkerSpec{}, CameraModel{}, pose, 1);
    EXPECT_FALSE(r.truth.marker_visible);
}

TEST(Render, RejectsBadScene) {
    ScenePose pose;
    pose.altitude = 0.0;
    EXPECT_THROW(render(MarkerSpec{}, CameraModel{}, pose, 1), ContractError);
}

TEST(Corpus, WritesFramesAltitudesAndTruth) {
    const auto dir = fresh_dir("files");
    CameraModel cam{160.0, 320, 240};
    const auto truth = make_corpus(CorpusRecipe{}, MarkerSpec{}, cam, 5, 9, dir);
    ASSERT_EQ(truth.size(), 5u);
    EXPECT_EQ(list_sequence_frames(dir).size(), 5u);
    EXPECT_EQ(read_altitude_log(dir / "altitude.csv").size(), 5u);
    std::ifstream in(dir / "truth.jsonl");
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, 5);
    for (const auto& t : truth) {
        EXPECT_GE(t.pose.altitude, 0.3);
        EXPECT_LE(t.pose.altitude, 1.5);
    }
}

TEST(Corpus, SameSeedSameBytes) {
    const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
    CameraModel cam{160.0, 320, 240};
    make_corpus(CorpusRecipe{}, MarkerSpec{}, cam, 3, 17, a);
    make_corpus(CorpusRecipe{}, MarkerSpec{}, cam, 3, 17, b);
    for (const auto& entry : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
    }
}

TEST(Corpus, SingleFixedFrameEqualsRender) {
    CorpusRecipe fixed;
    fixed.altitude_min = fixed.altitude_max = 1.2;
    fixed.yaw_min = fixed.yaw_max = 15.0;
    fixed.max_offset_fraction = 0.0;
    fixed.max_gain = 0.0;
    fixed.base_min = fixed.base_max = 220.0;
    fixed.max_noise_sigma = 0.0;
    fixed.backgrounds = {Background::Kind::Uniform};
    const MarkerSpec spec;
    const CameraModel cam{320.0, 320, 240};
    const auto dir = fresh_dir("single");
    make_corpus(fixed, spec, cam, 1, 5, dir);
    const auto pose = sample_pose(fixed, spec, cam, 5, 0);
    EXPECT_DOUBLE_EQ(pose.altitude, 1.2);
    EXPECT_DOUBLE_EQ(pose.yaw_deg, 15.0);
    const auto direct = render(spec, cam, pose, frame_seed(5, 0), 0);
    EXPECT_TRUE(load_pnm(dir / sequence_frame_name(0)).same_pixels(direct.frame));
    EXPECT_EQ(render_corpus(fixed, spec, cam, 1, 5)[0].frame.data().size(), direct.frame.data().size());
    EXPECT_TRUE(render_corpus(fixed, spec, cam, 1, 5)[0].frame.same_pixels(direct.frame));
}

TEST(Corpus, RejectsEmpty) {
    EXPECT_THROW(render_corpus(CorpusRecipe{}, MarkerSpec{}, CameraModel{}, 0, 1), ContractError);
}

TEST(SeverRing, PaintsAcrossTheRing) {
    ScenePose pose;
    auto r = render(MarkerSpec{}, CameraModel{}, pose, 1);
    const auto before = r.frame;
    sever_ring(r.frame, MarkerSpec{}, CameraModel{}, pose, 2, 6.0);
    EXPECT_FALSE(r.frame.same_pixels(before));
}

TEST(BackgroundNames, RoundTrip) {
    for (auto k : {Background::Kind::Uniform, Background::Kind::Checker, Background::Kind::Texture}) {
        EXPECT_EQ(parse_background_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_background_kind("plaid"), ContractError);
}
