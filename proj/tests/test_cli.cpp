#include "padland/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace padland;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path workdir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("padland_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// A small camera keeps these tests quick.
std::string small_config(const fs::path& dir) {
    const auto path = dir / "small.json";
    std::ofstream(path) << R"({"camera": {"focal_px": 320, "width": 400, "height": 300}, "pipeline": {"window": 32}})";
    return path.string();
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"detect"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"bench", "--no-such-flag"}).code, 2);
    EXPECT_EQ(cli({"--binarize", "otsu", "bench"}).code, 2);
    EXPECT_EQ(cli({"--connectivity", "6", "bench", "--frames", "10", "--width", "64", "--height", "64"}).code, 2);
    EXPECT_EQ(cli({"render"}).code, 2);  // needs --out
}

TEST(Cli, HelpExitsZero) {
    const auto r = cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, RenderThenDetectSingleFrame) {
    const auto dir = workdir("single");
    const auto cfg = small_config(dir);
    ASSERT_EQ(cli({"--config", cfg, "--out", (dir / "seq").string(), "render", "--altitude", "1.0", "--yaw", "30"}).code, 0);
    const auto frame = (dir / "seq" / sequence_frame_name(0)).string();
    const auto r = cli({"--config", cfg, "detect", frame, "--annotate", (dir / "ann").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = nlohmann::json::parse(r.out);
    ASSERT_FALSE(rec["pose"].is_null());
    EXPECT_NEAR(rec["pose"]["orientation_deg"].get<double>(), 30.0, 1.5);
    EXPECT_DOUBLE_EQ(rec["altitude_m"].get<double>(), 1.0);
    for (auto s : kStageNames) EXPECT_TRUE(rec["timings_ms"].contains(std::string(s))) << s;
    EXPECT_TRUE(fs::exists(dir / "ann" / sequence_frame_name(0)));
}

TEST(Cli, MissingAltitudeLogExitsTwo) {
    const auto dir = workdir("noalt");
    const auto cfg = small_config(dir);
    ASSERT_EQ(cli({"--config", cfg, "--out", (dir / "seq").string(), "render", "--altitude", "1.0"}).code, 0);
    fs::remove(dir / "seq" / "altitude.csv");
    EXPECT_EQ(cli({"--config", cfg, "detect", (dir / "seq").string()}).code, 2);
    EXPECT_EQ(cli({"--config", cfg, "detect", (dir / "seq" / sequence_frame_name(0)).string()}).code, 2);
    EXPECT_EQ(cli({"--config", cfg, "detect", (dir / "seq").string(), "--altitude", "1.0"}).code, 0);
}

TEST(Cli, CorruptFrameExitsTwo) {
    const auto dir = workdir("corrupt");
    std::ofstream(dir / "frame_000000.ppm") << "P6\n10 10\n255\nabc";
    EXPECT_EQ(cli({"detect", (dir / "frame_000000.ppm").string(), "--altitude", "1"}).code, 2);
}

TEST(Cli, SequenceAndEval) {
    const auto dir = workdir("eval");
    const auto cfg = small_config(dir);
    const auto seq = (dir / "seq").string();
    ASSERT_EQ(cli({"--config", cfg, "--out", seq, "--seed", "4", "render", "--frames", "6"}).code, 0);
    const auto det = cli({"--config", cfg, "detect", seq});
    ASSERT_EQ(det.code, 0) << det.err;
    EXPECT_EQ(std::count(det.out.begin(), det.out.end(), '\n'), 6);

    const auto report = (dir / "metrics.json").string();
    const auto ev = cli({"--config", cfg, "--out", report, "eval", seq});
    ASSERT_EQ(ev.code, 0) << ev.err;
    EXPECT_NE(ev.out.find("detection rate"), std::string::npos);
    std::ifstream in(report);
    const auto doc = nlohmann::json::parse(in);
    EXPECT_EQ(doc["frames"].get<int>(), 6);
}

TEST(Cli, TruthCountMismatchExitsTwo) {
    const auto dir = workdir("mismatch");
    const auto cfg = small_config(dir);
    const auto seq = dir / "seq";
    ASSERT_EQ(cli({"--config", cfg, "--out", seq.string(), "render", "--frames", "3"}).code, 0);
    fs::remove(seq / sequence_frame_name(2));
    EXPECT_EQ(cli({"--config", cfg, "eval", seq.string()}).code, 2);
}

TEST(Cli, SeveredRingGivesNoPose) {
    const auto dir = workdir("sever");
    const auto cfg = small_config(dir);
    const auto seq = dir / "seq";
    ASSERT_EQ(cli({"--config", cfg, "--out", seq.string(), "render", "--altitude", "1.0", "--sever", "3"}).code, 0);
    const auto r = cli({"--config", cfg, "detect", seq.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pose"].is_null());
}

TEST(Cli, BenchListsEveryStage) {
    const auto dir = workdir("bench");
    const auto json_path = (dir / "bench.json").string();
    const auto r = cli({"--out", json_path, "bench", "--width", "320", "--height", "240", "--frames", "12"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (auto s : kStageNames) EXPECT_NE(r.out.find(std::string(s)), std::string::npos) << s;
    EXPECT_NE(r.out.find("fps"), std::string::npos);
    std::ifstream in(json_path);
    const auto doc = nlohmann::json::parse(in);
    EXPECT_EQ(doc["frames"].get<int>(), 12);
    EXPECT_EQ(cli({"bench", "--frames", "5"}).code, 2);
}

TEST(Cli, SimulateWritesLog) {
    const auto dir = workdir("sim");
    const auto cfg = dir / "sim.json";
    std::ofstream(cfg) << R"({"camera": {"focal_px": 300, "width": 400, "height": 300}, "pipeline": {"window": 64},
                             "lander": {"timeout_s": 3}})";
    const auto log = (dir / "log.jsonl").string();
    const auto r = cli({"--config", cfg.string(), "--out", log, "simulate", "--x", "0.1", "--altitude", "1.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_EQ(summary["ticks"].get<int>(), 180);
    std::ifstream in(log);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(nlohmann::json::parse(first)["phase"], "align");
    EXPECT_EQ(cli({"simulate", "--altitude", "4"}).code, 2);
}
