// Windowed min/max adaptive thresholding and its comparison variants.
//
// Each non-overlapping window contributes th = 0.25 * (max - min) + min. The
// interpolated binarizer anchors every window's threshold at the centre of the
// window (partial edge windows use the centre of their actual pixels) and blends
// the up-to-four surrounding anchors bilinearly. Beyond the outermost centres the
// coordinate is clamped, which leaves two contributing windows along the edge
// bands and one in the corners.
//
// Foreground (255) means "darker than the threshold": pixel < th, strictly.
// All comparisons are carried out in exact integer arithmetic.

#pragma once

#include "padland/frame.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padland {

inline constexpr int kDefaultWindow = 128;
inline constexpr int kDefaultLocalRadius = 64;

struct ThresholdCell {
    std::uint8_t min = 0;
    std::uint8_t max = 0;
    double th = 0.0;  // exact: quarter steps are representable

    /// 4 * th, an integer.
    int th4() const noexcept { return 3 * min + max; }
};

struct ThresholdGrid {
    int window = kDefaultWindow;
    int width = 0;   // frame the grid was computed over
    int height = 0;
    int cols = 0;
    int rows = 0;
    std::int64_t source_frame = 0;
    std::vector<ThresholdCell> cells;  // row-major, rows * cols

    const ThresholdCell& cell(int col, int row) const { return cells[static_cast<std::size_t>(row) * cols + col]; }
    ThresholdCell& cell(int col, int row) { return cells[static_cast<std::size_t>(row) * cols + col]; }

    /// Recomputes every th from its (min, max). Use after editing cells by hand.
    void refresh_thresholds();
};

/// th = 0.25 * (max - min) + min.
double window_threshold(int min, int max) noexcept;

/// Per-window min/max of a Grey frame. Throws ContractError if window < 2.
ThresholdGrid compute_grid(const Frame& grey, int window = kDefaultWindow);

/// Bilinearly interpolated threshold of pixel (x, y), as a real. Used for
/// diagnostics and tests; the binarizer itself compares exactly.
double interpolated_threshold(const ThresholdGrid& grid, int x, int y);

Frame apply_interpolated(const Frame& grey, const ThresholdGrid& grid);

/// Each pixel against its own window's threshold, no interpolation.
Frame apply_windowed(const Frame& grey, const ThresholdGrid& grid);

/// Foreground iff pixel < th.
Frame apply_global(const Frame& grey, double th);

/// Window rule applied per pixel over a (2r+1)^2 replicate-padded
/// neighbourhood. Foreground iff 4 * pixel < 3 * min + max.
Frame apply_local(const Frame& grey, int radius = kDefaultLocalRadius);

enum class BinarizeMode { Interpolated, Windowed, Local, Global };

std::string to_string(BinarizeMode mode);
/// Accepts the CLI spellings interp|window|local|global.
BinarizeMode parse_binarize_mode(const std::string& text);

/**
 * Frame-lag binarizer: frame N is thresholded with the grid computed from
 * frame N-1. The first frame bootstraps with its own grid. Frame indices must
 * be strictly increasing.
 */
class ThresholdStream {
public:
    explicit ThresholdStream(int window = kDefaultWindow,
                             BinarizeMode mode = BinarizeMode::Interpolated);

    struct Result {
        Frame binary;
        ThresholdGrid grid;  // grid the frame was binarized with
    };

    Result push(const Frame& grey);

    void reset();
    const std::optional<ThresholdGrid>& previous_grid() const noexcept { return previous_; }

private:
    int window_;
    BinarizeMode mode_;
    std::optional<ThresholdGrid> previous_;
    std::optional<std::int64_t> last_index_;
};

/// Batch form of ThresholdStream with interpolation.
std::vector<Frame> stream_binarize(const std::vector<Frame>& frames, int window = kDefaultWindow);

}  // namespace padland
