#include "padland/synth.hpp"

#include "padland/imgio.hpp"
#include "padland/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

namespace padland {

std::string to_string(Background::Kind kind) {
    switch (kind) {
        case Background::Kind::Uniform: return "uniform";
        case Background::Kind::Checker: return "checker";
        case Background::Kind::Texture: return "texture";
    }
    return "?";
}

Background::Kind parse_background_kind(const std::string& text) {
    if (text == "uniform") return Background::Kind::Uniform;
    if (text == "checker") return Background::Kind::Checker;
    if (text == "texture") return Background::Kind::Texture;
    throw ContractError("unknown background '" + text + "'");
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double lattice_value(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
    const auto h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(ix) * 0x632be59bd9b4e019ULL +
                                                static_cast<std::uint64_t>(iy)));
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

// Bilinear value noise in [0, 1).
double value_noise(std::uint64_t seed, double x, double y) {
    const double fx = std::floor(x), fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy);
    double tx = x - fx, ty = y - fy;
    tx = tx * tx * (3 - 2 * tx);
    ty = ty * ty * (3 - 2 * ty);
    const double a = lattice_value(seed, ix, iy), b = lattice_value(seed, ix + 1, iy);
    const double c = lattice_value(seed, ix, iy + 1), d = lattice_value(seed, ix + 1, iy + 1);
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

double background_value(const Background& bg, int x, int y) {
    switch (bg.kind) {
        case Background::Kind::Uniform: return bg.level;
        case Background::Kind::Checker: {
            const auto cx = static_cast<std::int64_t>(std::floor(x / bg.period_px));
            const auto cy = static_cast<std::int64_t>(std::floor(y / bg.period_px));
            return ((cx + cy) & 1) ? bg.level_b : bg.level_a;
        }
        case Background::Kind::Texture: {
            // Three octaves starting at the finest lattice period.
            double v = 0.0, amp = 0.5, period = bg.texture_scale_px, norm = 0.0;
            for (int o = 0; o < 3; ++o) {
                v += amp * (value_noise(bg.texture_seed + static_cast<std::uint64_t>(o), x / period, y / period) - 0.5);
                norm += amp;
                amp *= 0.5;
                period *= 2.0;
            }
            return bg.texture_mean + bg.texture_contrast * v / norm;
        }
    }
    return bg.level;
}

// Marker-frame layout evaluated at one ground point.
struct Layout {
    double r_out, r_in, r_small;
    Vec2 sq;
    double sq_half;
    Vec2 rc;
    double rc_half_x, rc_half_y;
    double pad_half;

    explicit Layout(const MarkerSpec& s)
        : r_out(s.large_circle_outer_diameter / 2), r_in(s.ring_inner_diameter() / 2),
          r_small(s.small_circle_diameter / 2), sq(s.square_centre_offset), sq_half(s.square_side / 2),
          rc(s.rect_centre_offset), rc_half_x(s.rect_height / 2), rc_half_y(s.rect_width / 2),
          pad_half(s.pad_side / 2) {}

    enum Material { kBackground = 0, kWhite = 1, kInk = 2 };

    static double box_sdf(double u, double v, const Vec2& c, double hx, double hy) {
        return std::max(std::abs(u - c.x) - hx, std::abs(v - c.y) - hy);
    }

    Material at(double u, double v) const {
        if (std::abs(u) > pad_half || std::abs(v) > pad_half) return kBackground;
        const double rho2 = u * u + v * v;
        if ((rho2 <= r_out * r_out && rho2 >= r_in * r_in) || rho2 <= r_small * r_small) return kInk;
        if (box_sdf(u, v, sq, sq_half, sq_half) <= 0 || box_sdf(u, v, rc, rc_half_x, rc_half_y) <= 0) return kInk;
        return kWhite;
    }

    // Material at (u, v) if no figure boundary passes within @p reach of it,
    // otherwise -1 (the pixel needs supersampling).
    int material_if_uniform(double u, double v, double reach) const {
        const double pad = box_sdf(u, v, {0, 0}, pad_half, pad_half);
        if (pad > reach) return kBackground;
        if (pad >= -reach) return -1;
        const double rho = std::sqrt(u * u + v * v);
        if (std::abs(rho - r_out) <= reach || std::abs(rho - r_in) <= reach || std::abs(rho - r_small) <= reach) {
            return -1;
        }
        if ((rho < r_out && rho > r_in) || rho < r_small) return kInk;
        const double dsq = box_sdf(u, v, sq, sq_half, sq_half);
        const double drc = box_sdf(u, v, rc, rc_half_x, rc_half_y);
        if (std::abs(dsq) <= reach || std::abs(drc) <= reach) return -1;
        return dsq < 0 || drc < 0 ? kInk : kWhite;
    }
};

// Affine map from pixel coordinates to marker-frame metres.
struct PixelToGround {
    double u0, ux, uy, v0, vx, vy;
    double metres_per_px;

    PixelToGround(const CameraModel& cam, const ScenePose& pose) {
        const double s = cam.focal_px / pose.altitude;
        const double c = std::cos(pose.yaw_deg * kDegToRad), sn = std::sin(pose.yaw_deg * kDegToRad);
        const Vec2 pp = cam.principal_point();
        // P = d + R(-yaw) * (p - pp) / s
        ux = c / s;
        uy = sn / s;
        vx = -sn / s;
        vy = c / s;
        u0 = pose.x - ux * pp.x - uy * pp.y;
        v0 = pose.y - vx * pp.x - vy * pp.y;
        metres_per_px = 1.0 / s;
    }
};

// Ground (marker-frame) point to pixel.
Vec2 project(const CameraModel& cam, const ScenePose& pose, const Vec2& p) {
    const double s = cam.focal_px / pose.altitude;
    const double c = std::cos(pose.yaw_deg * kDegToRad), sn = std::sin(pose.yaw_deg * kDegToRad);
    const double gx = p.x - pose.x, gy = p.y - pose.y;
    const Vec2 pp = cam.principal_point();
    return {pp.x + s * (c * gx - sn * gy), pp.y + s * (sn * gx + c * gy)};
}

FigureTruth circle_truth(const CameraModel& cam, const ScenePose& pose, double radius_m) {
    const Vec2 c = project(cam, pose, {0, 0});
    const double r = radius_m * cam.focal_px / pose.altitude;
    FigureTruth t;
    t.bbox = {c.x - r, c.y - r, c.x + r, c.y + r};
    return t;
}

FigureTruth box_truth(const CameraModel& cam, const ScenePose& pose, const Vec2& centre, double hx, double hy) {
    FigureTruth t;
    t.bbox = {1e300, 1e300, -1e300, -1e300};
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
            const Vec2 p = project(cam, pose, {centre.x + sx * hx, centre.y + sy * hy});
            t.bbox.min_x = std::min(t.bbox.min_x, p.x);
            t.bbox.min_y = std::min(t.bbox.min_y, p.y);
            t.bbox.max_x = std::max(t.bbox.max_x, p.x);
            t.bbox.max_y = std::max(t.bbox.max_y, p.y);
        }
    }
    return t;
}

void set_visibility(FigureTruth& t, const CameraModel& cam) {
    // Pixel footprints extend half a pixel past the centre coordinates.
    t.visible = t.bbox.min_x >= -0.5 && t.bbox.min_y >= -0.5 && t.bbox.max_x <= cam.width - 0.5 &&
                t.bbox.max_y <= cam.height - 0.5;
}

}  // namespace

GroundTruth scene_truth(const MarkerSpec& spec, const CameraModel& cam, const ScenePose& pose,
                        std::int64_t frame_index) {
    if (!(pose.altitude > 0.0)) throw ContractError("render: altitude must be positive");
    cam.validate();
    GroundTruth t;
    t.frame_index = frame_index;
    t.pose = pose;
    t.marker_present = pose.marker_present;
    if (!pose.marker_present) return t;

    t.centre_px = project(cam, pose, {0, 0});
    const double axis = std::atan2(spec.rect_centre_offset.y - spec.square_centre_offset.y,
                                   spec.rect_centre_offset.x - spec.square_centre_offset.x) / kDegToRad;
    t.orientation_deg = wrap_degrees(pose.yaw_deg + axis - spec.nominal_axis_deg);
    t.large_circle = circle_truth(cam, pose, spec.large_circle_outer_diameter / 2);
    t.small_circle = circle_truth(cam, pose, spec.small_circle_diameter / 2);
    t.square = box_truth(cam, pose, spec.square_centre_offset, spec.square_side / 2, spec.square_side / 2);
    t.rectangle = box_truth(cam, pose, spec.rect_centre_offset, spec.rect_height / 2, spec.rect_width / 2);
    for (auto* f : {&t.large_circle, &t.small_circle, &t.square, &t.rectangle}) set_visibility(*f, cam);
    t.marker_visible = t.large_circle.visible;
    return t;
}

RenderResult render(const MarkerSpec& spec, const CameraModel& cam, const ScenePose& pose, std::uint64_t seed,
                    std::int64_t frame_index) {
    GroundTruth truth = scene_truth(spec, cam, pose, frame_index);

    const Layout layout(spec);
    const PixelToGround map(cam, pose);
    // Half-diagonal of a pixel, padded for rounding.
    const double reach = map.metres_per_px * std::numbers::sqrt2 * 0.5 * 1.001;
    const auto& il = pose.illumination;
    const Vec2 pp = cam.principal_point();
    const double half_w = std::max(pp.x, 0.5), half_h = std::max(pp.y, 0.5);
    const auto& tint = pose.background.tint;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, pose.noise_sigma > 0 ? pose.noise_sigma : 1.0);

    Frame frame(cam.width, cam.height, PixelKind::RGB, frame_index);
    auto data = frame.data();
    const bool grey_bg = tint[0] == tint[1] && tint[1] == tint[2];
    const bool flat_bg = grey_bg && pose.background.kind == Background::Kind::Uniform && il.gain_x == 0.0 &&
                         pose.noise_sigma <= 0;
    const double pad_reach = layout.pad_half + reach;
    auto quantize = [](double value) {
        return static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
    };

    for (int y = 0; y < cam.height; ++y) {
        const double ramp_y = il.gain_y * (y - pp.y) / half_h;
        // Columns whose ground point can touch the pad; the rest is background.
        double lo = 0.0, hi = cam.width - 1.0;
        if (!pose.marker_present) {
            lo = 1.0;
            hi = 0.0;
        } else {
            auto clip = [&](double a0, double a1) {
                // pad_reach >= |a0 + a1 * x|
                if (a1 == 0.0) {
                    if (std::abs(a0) > pad_reach) hi = lo - 1.0;
                    return;
                }
                double x0 = (-pad_reach - a0) / a1, x1 = (pad_reach - a0) / a1;
                if (x0 > x1) std::swap(x0, x1);
                lo = std::max(lo, std::floor(x0) - 1.0);
                hi = std::min(hi, std::ceil(x1) + 1.0);
            };
            clip(map.u0 + map.uy * y, map.ux);
            clip(map.v0 + map.vy * y, map.vx);
        }
        const std::uint8_t flat = flat_bg ? quantize(pose.background.level * tint[0] + ramp_y) : 0;
        std::uint8_t* row = data.data() + static_cast<std::size_t>(y) * cam.width * 3;

        for (int x = 0; x < cam.width; ++x) {
            std::uint8_t* px = row + static_cast<std::size_t>(x) * 3;
            const bool near_pad = x >= lo && x <= hi;
            if (!near_pad && flat_bg) {
                px[0] = px[1] = px[2] = flat;
                continue;
            }
            int counts[3] = {16, 0, 0};  // background, white, ink samples out of 16
            if (near_pad) {
                const double u = map.u0 + map.ux * x + map.uy * y;
                const double v = map.v0 + map.vx * x + map.vy * y;
                const int m = layout.material_if_uniform(u, v, reach);
                if (m >= 0) {
                    counts[0] = 0;
                    counts[m] = 16;
                } else {
                    counts[0] = 0;
                    for (int sy = 0; sy < 4; ++sy) {
                        const double py = y - 0.375 + 0.25 * sy;
                        for (int sx = 0; sx < 4; ++sx) {
                            const double qx = x - 0.375 + 0.25 * sx;
                            ++counts[layout.at(map.u0 + map.ux * qx + map.uy * py, map.v0 + map.vx * qx + map.vy * py)];
                        }
                    }
                }
            }
            if (counts[0] == 16 && flat_bg) {
                px[0] = px[1] = px[2] = flat;
                continue;
            }
            const double bg = counts[Layout::kBackground] ? background_value(pose.background, x, y) : 0.0;
            const double fixed = (counts[Layout::kWhite] * il.base + counts[Layout::kInk] * il.ink) / 16.0;
            const double ramp = ramp_y + il.gain_x * (x - pp.x) / half_w;
            if (grey_bg && pose.noise_sigma <= 0) {
                px[0] = px[1] = px[2] = quantize(fixed + counts[Layout::kBackground] * bg * tint[0] / 16.0 + ramp);
                continue;
            }
            for (int c = 0; c < 3; ++c) {
                double value = fixed + counts[Layout::kBackground] * bg * tint[static_cast<std::size_t>(c)] / 16.0 + ramp;
                if (pose.noise_sigma > 0) value += noise(rng);
                px[c] = quantize(value);
            }
        }
    }
    return {std::move(frame), std::move(truth)};
}

std::uint64_t frame_seed(std::uint64_t seed, std::int64_t index) {
    return splitmix64(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(index) + 1);
}

ScenePose sample_pose(const CorpusRecipe& recipe, const MarkerSpec& spec, const CameraModel& cam,
                      std::uint64_t seed, std::int64_t index) {
    std::mt19937_64 rng(splitmix64(seed ^ 0x5bd1e995ULL) + static_cast<std::uint64_t>(index));
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

    ScenePose pose;
    pose.marker_present = recipe.marker_present;
    pose.altitude = uniform(recipe.altitude_min, recipe.altitude_max);
    pose.yaw_deg = uniform(recipe.yaw_min, recipe.yaw_max);

    // Image-space offset of the marker centre, limited so the figures the
    // detector needs at this altitude stay inside the frame.
    const double scale = cam.focal_px / pose.altitude;
    const double needed_radius = pose.altitude < recipe.low_altitude_cutoff_m
                                     ? spec.small_circle_diameter / 2 * scale
                                     : spec.large_circle_outer_diameter / 2 * scale;
    const double lim_x = std::max(0.0, std::min(recipe.max_offset_fraction * cam.width,
                                                (cam.width - 1) / 2.0 - needed_radius - recipe.visibility_margin_px));
    const double lim_y = std::max(0.0, std::min(recipe.max_offset_fraction * cam.height,
                                                (cam.height - 1) / 2.0 - needed_radius - recipe.visibility_margin_px));
    const double ox = uniform(-lim_x, lim_x);
    const double oy = uniform(-lim_y, lim_y);
    // centre = pp - s R(yaw) d  =>  d = -R(-yaw) o / s
    const double c = std::cos(pose.yaw_deg * kDegToRad), sn = std::sin(pose.yaw_deg * kDegToRad);
    pose.x = -(c * ox + sn * oy) / scale;
    pose.y = -(-sn * ox + c * oy) / scale;

    pose.illumination.base = uniform(recipe.base_min, recipe.base_max);
    pose.illumination.ink = uniform(15.0, 45.0);
    pose.illumination.gain_x = uniform(-recipe.max_gain, recipe.max_gain);
    pose.illumination.gain_y = uniform(-recipe.max_gain, recipe.max_gain);
    pose.noise_sigma = uniform(0.0, recipe.max_noise_sigma);

    if (!recipe.backgrounds.empty()) {
        const auto k = std::uniform_int_distribution<std::size_t>(0, recipe.backgrounds.size() - 1)(rng);
        pose.background.kind = recipe.backgrounds[k];
    }
    auto& bg = pose.background;
    bg.level = uniform(60.0, 160.0);
    bg.period_px = uniform(6.0, 14.0);
    const double mid = uniform(80.0, 150.0), half = uniform(15.0, 40.0);
    bg.level_a = mid - half;
    bg.level_b = mid + half;
    bg.texture_seed = rng();
    bg.texture_mean = uniform(80.0, 160.0);
    bg.texture_contrast = uniform(30.0, 80.0);
    bg.texture_scale_px = uniform(2.0, 4.0);
    bg.tint = {uniform(0.8, 1.1), uniform(0.9, 1.15), uniform(0.7, 1.0)};
    return pose;
}

std::vector<RenderResult> render_corpus(const CorpusRecipe& recipe, const MarkerSpec& spec, const CameraModel& cam,
                                        int n, std::uint64_t seed) {
    if (n < 1) throw ContractError("make_corpus: n must be >= 1");
    std::vector<RenderResult> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const ScenePose pose = sample_pose(recipe, spec, cam, seed, i);
        out.push_back(render(spec, cam, pose, frame_seed(seed, i), i));
    }
    return out;
}

std::vector<GroundTruth> make_corpus(const CorpusRecipe& recipe, const MarkerSpec& spec, const CameraModel& cam,
                                     int n, std::uint64_t seed, const std::filesystem::path& dir) {
    if (n < 1) throw ContractError("make_corpus: n must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::ofstream truth_out(dir / "truth.jsonl");
    if (!truth_out) throw IoError("cannot write " + (dir / "truth.jsonl").string());
    std::map<std::int64_t, double> altitudes;
    std::vector<GroundTruth> truths;
    for (int i = 0; i < n; ++i) {
        const ScenePose pose = sample_pose(recipe, spec, cam, seed, i);
        auto rendered = render(spec, cam, pose, frame_seed(seed, i), i);
        save_pnm(rendered.frame, dir / sequence_frame_name(i));
        altitudes[i] = pose.altitude;
        truth_out << nlohmann::json(rendered.truth).dump() << '\n';
        truths.push_back(std::move(rendered.truth));
    }
    write_altitude_log(dir / "altitude.csv", altitudes);
    if (!truth_out) throw IoError("write failed for truth.jsonl");
    return truths;
}

void sever_ring(Frame& rgb, const MarkerSpec& spec, const CameraModel& cam, const ScenePose& pose, int cuts,
                double cut_width_px, std::uint8_t level) {
    require_kind(rgb, PixelKind::RGB, "sever_ring");
    if (cuts < 1) return;
    const double s = cam.focal_px / pose.altitude;
    const Vec2 c = project(cam, pose, {0, 0});
    const double r_out = spec.large_circle_outer_diameter / 2 * s + 2.0;
    const double r_in = spec.ring_inner_diameter() / 2 * s - 2.0;
    for (int k = 0; k < cuts; ++k) {
        const double a = (pose.yaw_deg + 360.0 * k / cuts + 180.0 / cuts) * kDegToRad;
        const double dx = std::cos(a), dy = std::sin(a);
        const int x0 = static_cast<int>(std::floor(c.x - r_out)), x1 = static_cast<int>(std::ceil(c.x + r_out));
        const int y0 = static_cast<int>(std::floor(c.y - r_out)), y1 = static_cast<int>(std::ceil(c.y + r_out));
        for (int y = std::max(0, y0); y <= std::min(rgb.height() - 1, y1); ++y) {
            for (int x = std::max(0, x0); x <= std::min(rgb.width() - 1, x1); ++x) {
                const double px = x - c.x, py = y - c.y;
                const double along = px * dx + py * dy;
                const double across = std::abs(-px * dy + py * dx);
                if (along >= r_in && along <= r_out && across <= cut_width_px / 2) {
                    for (int ch = 0; ch < 3; ++ch) rgb.at(x, y, ch) = level;
                }
            }
        }
    }
}

}  // namespace padland
