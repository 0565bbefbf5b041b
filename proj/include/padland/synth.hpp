// Deterministic renderer of the landing marker seen by a nadir pinhole
//        camera, and the seeded corpus generator built on it.
//
// Geometry: a marker-frame point P appears at pixel c + s * R(yaw) * (P - d),
// where c is the principal point, s = focal / altitude, d the drone position
// on the ground and R the image-plane rotation (clockwise on screen for
// positive yaw). The marker therefore shows up rotated by +yaw.
//
// Each pixel covers [x - 0.5, x + 0.5) x [y - 0.5, y + 0.5). Pixels crossed by a
// figure edge are supersampled on a 4x4 grid; the rest are evaluated once,
// which gives the same result because all 16 samples would agree.

#pragma once

#include "padland/frame.hpp"
#include "padland/marker.hpp"
#include "padland/shapes.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace padland {

struct Illumination {
    double base = 220.0;      // pad white level at the image centre
    double ink = 25.0;        // marker black level
    double gain_x = 0.0;      // additive grey levels at the right edge (-gain at the left)
    double gain_y = 0.0;      // same for the bottom edge
};

struct Background {
    enum class Kind { Uniform, Checker, Texture };
    Kind kind = Kind::Uniform;
    double level = 110.0;                       // Uniform
    double period_px = 40.0;                    // Checker square side
    double level_a = 70.0, level_b = 160.0;     // Checker levels
    std::uint64_t texture_seed = 1;             // Texture
    double texture_mean = 120.0;
    double texture_contrast = 50.0;             // peak-to-peak of the finest octave set
    double texture_scale_px = 3.0;              // finest lattice period
    std::array<double, 3> tint{1.0, 1.0, 1.0};  // per-channel multiplier
};

std::string to_string(Background::Kind kind);
Background::Kind parse_background_kind(const std::string& text);

struct ScenePose {
    double x = 0.0, y = 0.0;  // drone position relative to pad centre, metres
    double altitude = 1.0;
    double yaw_deg = 0.0;
    Illumination illumination;
    double noise_sigma = 0.0;
    Background background;
    bool marker_present = true;
};

struct RealBox {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    bool contains(const BoundingBox& b) const {
        return b.min_x >= min_x && b.min_y >= min_y && b.max_x <= max_x && b.max_y <= max_y;
    }
};

struct FigureTruth {
    RealBox bbox;  // analytic, in pixel-centre coordinates; may extend past the frame
    bool visible = false;  // entirely inside the frame
};

struct GroundTruth {
    std::int64_t frame_index = 0;
    bool marker_present = true;
    bool marker_visible = false;  // the whole ring is in the frame
    Vec2 centre_px;
    double orientation_deg = 0.0;
    FigureTruth large_circle, small_circle, square, rectangle;
    ScenePose pose;
};

struct RenderResult {
    Frame frame;  // RGB
    GroundTruth truth;
};

RenderResult render(const MarkerSpec& spec, const CameraModel& cam, const ScenePose& pose, std::uint64_t seed,
                    std::int64_t frame_index = 0);

/// Ground truth alone (no rasterization).
GroundTruth scene_truth(const MarkerSpec& spec, const CameraModel& cam, const ScenePose& pose,
                        std::int64_t frame_index = 0);

struct CorpusRecipe {
    double altitude_min = 0.3, altitude_max = 1.5;
    double yaw_min = -180.0, yaw_max = 180.0;
    double max_offset_fraction = 0.4;  // of the frame width / height
    double visibility_margin_px = 4.0;
    double low_altitude_cutoff_m = 0.35;  // below it only the small circle must fit
    double max_gain = 40.0;
    double base_min = 170.0, base_max = 235.0;
    double max_noise_sigma = 4.0;
    bool marker_present = true;
    std::vector<Background::Kind> backgrounds{Background::Kind::Uniform, Background::Kind::Checker,
                                              Background::Kind::Texture};
};

/// Deterministic pose draw for frame @p index of a corpus seeded with @p seed.
ScenePose sample_pose(const CorpusRecipe& recipe, const MarkerSpec& spec, const CameraModel& cam,
                      std::uint64_t seed, std::int64_t index);

/// Per-frame noise seed derived from the corpus seed.
std::uint64_t frame_seed(std::uint64_t seed, std::int64_t index);

/**
 * Writes frame_%06d.ppm, altitude.csv and truth.jsonl into @p dir (created if
 * needed). Returns the ground truth records in frame order.
 */
std::vector<GroundTruth> make_corpus(const CorpusRecipe& recipe, const MarkerSpec& spec, const CameraModel& cam,
                                     int n, std::uint64_t seed, const std::filesystem::path& dir);

/// Same corpus as make_corpus, in memory.
std::vector<RenderResult> render_corpus(const CorpusRecipe& recipe, const MarkerSpec& spec, const CameraModel& cam,
                                        int n, std::uint64_t seed);

/// Overwrites radial white cuts through the ring of a rendered frame, leaving
/// it in @p cuts disconnected arcs.
void sever_ring(Frame& rgb, const MarkerSpec& spec, const CameraModel& cam, const ScenePose& pose, int cuts,
                double cut_width_px, std::uint8_t level = 235);

}  // namespace padland
