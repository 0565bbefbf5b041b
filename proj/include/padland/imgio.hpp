// Binary PGM/PPM codec, frame-sequence directories and overlay drawing.

#pragma once

#include "padland/frame.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace padland {

/// Malformed PNM input. offset() is the byte position where decoding failed.
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes P5 (Grey) or P6 (RGB) with maxval 255. Header comments are skipped.
Frame read_pnm(std::span<const std::uint8_t> bytes);

/// Canonical "P<n>\n<w> <h>\n255\n" header followed by the raster.
std::vector<std::uint8_t> write_pnm(const Frame& frame);

Frame load_pnm(const std::filesystem::path& path);
void save_pnm(const Frame& frame, const std::filesystem::path& path);

// --- overlays ---------------------------------------------------------------

using Rgb = std::array<std::uint8_t, 3>;

namespace colors {
inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};
inline constexpr Rgb kBlue{0, 0, 255};
inline constexpr Rgb kOrange{255, 165, 0};
inline constexpr Rgb kMagenta{255, 0, 255};
}  // namespace colors

struct BoxOverlay {
    int min_x, min_y, max_x, max_y;  // inclusive
};
struct PointOverlay {
    double x, y;
};
struct LineOverlay {
    double x0, y0, x1, y1;
};

struct Overlay {
    std::variant<BoxOverlay, PointOverlay, LineOverlay> shape;
    Rgb color;
};

/**
 * RGB copy of @p frame with overlays drawn in list order (later overlays win on
 * shared pixels): 1-px box outlines, 3x3 filled points, 1-px lines. Anything
 * outside the frame is clipped.
 */
Frame annotate(const Frame& frame, std::span<const Overlay> overlays);

// --- sequence directories ----------------------------------------------------

std::string sequence_frame_name(std::int64_t index);  // frame_%06d.ppm

/// Sorted frame indices of every frame_NNNNNN.ppm/.pgm in @p dir.
std::vector<std::int64_t> list_sequence_frames(const std::filesystem::path& dir);

/// Path of frame @p index (prefers .ppm, falls back to .pgm).
std::filesystem::path sequence_frame_path(const std::filesystem::path& dir, std::int64_t index);

/// Parses altitude.csv lines "frame_index,altitude_m". Blank lines are ignored.
std::map<std::int64_t, double> read_altitude_log(const std::filesystem::path& path);
void write_altitude_log(const std::filesystem::path& path,
                        const std::map<std::int64_t, double>& altitudes);

}  // namespace padland
