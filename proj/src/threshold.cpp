#include "padland/threshold.hpp"

#include <algorithm>
#include <deque>

namespace padland {

double window_threshold(int min, int max) noexcept { return 0.25 * (max - min) + min; }

void ThresholdGrid::refresh_thresholds() {
    for (auto& c : cells) c.th = window_threshold(c.min, c.max);
}

ThresholdGrid compute_grid(const Frame& grey, int window) {
    require_kind(grey, PixelKind::Grey, "compute_grid");
    if (window < 2) throw ContractError("compute_grid: window must be >= 2");
    ThresholdGrid grid;
    grid.window = window;
    grid.width = grey.width();
    grid.height = grey.height();
    grid.cols = (grey.width() + window - 1) / window;
    grid.rows = (grey.height() + window - 1) / window;
    grid.source_frame = grey.frame_index();
    grid.cells.assign(static_cast<std::size_t>(grid.cols) * grid.rows, ThresholdCell{255, 0, 0.0});

    for (int y = 0; y < grey.height(); ++y) {
        const auto row = grey.row(y);
        const int r = y / window;
        for (int c = 0; c < grid.cols; ++c) {
            const int x0 = c * window;
            const int x1 = std::min(x0 + window, grey.width());
            const auto [lo, hi] = std::minmax_element(row.begin() + x0, row.begin() + x1);
            auto& cell = grid.cell(c, r);
            cell.min = std::min(cell.min, *lo);
            cell.max = std::max(cell.max, *hi);
        }
    }
    grid.refresh_thresholds();
    return grid;
}

namespace {

void require_match(const Frame& grey, const ThresholdGrid& grid, const char* op) {
    require_kind(grey, PixelKind::Grey, op);
    if (grid.width != grey.width() || grid.height != grey.height() || grid.window < 2 ||
        grid.cells.size() != static_cast<std::size_t>(grid.cols) * grid.rows) {
        throw ContractError(std::string(op) + ": threshold grid does not match frame size");
    }
}

// Blend of at most two neighbouring cells along one axis with integer weights:
// value = (w_lo * v[lo] + w_hi * v[hi]) / denom.
struct AxisBlend {
    int lo = 0, hi = 0;
    int w_lo = 1, w_hi = 0;
    int denom = 1;
};

// Doubled window centres make every anchor an integer.
std::vector<AxisBlend> axis_blends(int extent, int window, int cells) {
    std::vector<int> centre2(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) {
        const int first = i * window;
        const int last = std::min(first + window, extent) - 1;
        centre2[static_cast<std::size_t>(i)] = first + last;
    }
    std::vector<AxisBlend> out(static_cast<std::size_t>(extent));
    int i = 0;
    for (int x = 0; x < extent; ++x) {
        const int x2 = 2 * x;
        auto& b = out[static_cast<std::size_t>(x)];
        if (x2 <= centre2.front()) {
            b = {0, 0, 1, 0, 1};
        } else if (x2 >= centre2.back()) {
            b = {cells - 1, cells - 1, 1, 0, 1};
        } else {
            while (centre2[static_cast<std::size_t>(i + 1)] <= x2) ++i;
            const int d = centre2[static_cast<std::size_t>(i + 1)] - centre2[static_cast<std::size_t>(i)];
            const int w_hi = x2 - centre2[static_cast<std::size_t>(i)];
            b = {i, i + 1, d - w_hi, w_hi, d};
        }
    }
    return out;
}

}  // namespace

double interpolated_threshold(const ThresholdGrid& grid, int x, int y) {
    const auto bx = axis_blends(grid.width, grid.window, grid.cols)[static_cast<std::size_t>(x)];
    const auto by = axis_blends(grid.height, grid.window, grid.rows)[static_cast<std::size_t>(y)];
    const double top = (bx.w_lo * grid.cell(bx.lo, by.lo).th + bx.w_hi * grid.cell(bx.hi, by.lo).th) / bx.denom;
    const double bottom = (bx.w_lo * grid.cell(bx.lo, by.hi).th + bx.w_hi * grid.cell(bx.hi, by.hi).th) / bx.denom;
    return (by.w_lo * top + by.w_hi * bottom) / by.denom;
}

Frame apply_interpolated(const Frame& grey, const ThresholdGrid& grid) {
    require_match(grey, grid, "apply_interpolated");
    const auto xs = axis_blends(grid.width, grid.window, grid.cols);
    const auto ys = axis_blends(grid.height, grid.window, grid.rows);

    Frame out(grey.width(), grey.height(), PixelKind::Binary, grey.frame_index());
    // Per row: each column of cells blended vertically, scaled by 4 * denom_y.
    std::vector<std::int64_t> row_th(static_cast<std::size_t>(grid.cols));
    for (int y = 0; y < grey.height(); ++y) {
        const auto& by = ys[static_cast<std::size_t>(y)];
        for (int c = 0; c < grid.cols; ++c) {
            row_th[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(by.w_lo) * grid.cell(c, by.lo).th4() +
                                                 static_cast<std::int64_t>(by.w_hi) * grid.cell(c, by.hi).th4();
        }
        const auto src = grey.row(y);
        auto dst = out.row(y);
        for (int x = 0; x < grey.width(); ++x) {
            const auto& bx = xs[static_cast<std::size_t>(x)];
            const std::int64_t th = bx.w_lo * row_th[static_cast<std::size_t>(bx.lo)] +
                                    bx.w_hi * row_th[static_cast<std::size_t>(bx.hi)];
            const std::int64_t lhs = 4LL * src[x] * bx.denom * by.denom;
            dst[x] = lhs < th ? Frame::kForeground : Frame::kBackground;
        }
    }
    return out;
}

Frame apply_windowed(const Frame& grey, const ThresholdGrid& grid) {
    require_match(grey, grid, "apply_windowed");
    Frame out(grey.width(), grey.height(), PixelKind::Binary, grey.frame_index());
    for (int y = 0; y < grey.height(); ++y) {
        const auto src = grey.row(y);
        auto dst = out.row(y);
        const int r = y / grid.window;
        for (int x = 0; x < grey.width(); ++x) {
            const int th4 = grid.cell(x / grid.window, r).th4();
            dst[x] = 4 * src[x] < th4 ? Frame::kForeground : Frame::kBackground;
        }
    }
    return out;
}

Frame apply_global(const Frame& grey, double th) {
    require_kind(grey, PixelKind::Grey, "apply_global");
    Frame out(grey.width(), grey.height(), PixelKind::Binary, grey.frame_index());
    const auto src = grey.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] < th ? Frame::kForeground : Frame::kBackground;
    }
    return out;
}

namespace {

// Sliding min and max over [i - r, i + r] clipped to the array, which is the
// same as replicate padding for order statistics.
template <typename Get, typename Put>
void sliding_min_max(int n, int r, Get get, Put put) {
    std::deque<int> lo, hi;
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int want = std::min(n - 1, i + r);
        for (; next <= want; ++next) {
            const auto v = get(next);
            while (!lo.empty() && get(lo.back()) >= v) lo.pop_back();
            lo.push_back(next);
            while (!hi.empty() && get(hi.back()) <= v) hi.pop_back();
            hi.push_back(next);
        }
        while (lo.front() < i - r) lo.pop_front();
        while (hi.front() < i - r) hi.pop_front();
        put(i, get(lo.front()), get(hi.front()));
    }
}

}  // namespace

Frame apply_local(const Frame& grey, int radius) {
    require_kind(grey, PixelKind::Grey, "apply_local");
    if (radius < 1) throw ContractError("apply_local: radius must be >= 1");
    const int w = grey.width(), h = grey.height();
    std::vector<std::uint8_t> row_min(grey.pixel_count()), row_max(grey.pixel_count());
    for (int y = 0; y < h; ++y) {
        const auto src = grey.row(y);
        const std::size_t base = static_cast<std::size_t>(y) * w;
        sliding_min_max(
            w, radius, [&](int x) { return src[x]; },
            [&](int x, std::uint8_t mn, std::uint8_t mx) {
                row_min[base + x] = mn;
                row_max[base + x] = mx;
            });
    }
    Frame out(w, h, PixelKind::Binary, grey.frame_index());
    std::vector<std::uint8_t> col_min(static_cast<std::size_t>(h)), col_max(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        sliding_min_max(
            h, radius, [&](int y) { return row_min[static_cast<std::size_t>(y) * w + x]; },
            [&](int y, std::uint8_t mn, std::uint8_t) { col_min[static_cast<std::size_t>(y)] = mn; });
        sliding_min_max(
            h, radius, [&](int y) { return row_max[static_cast<std::size_t>(y) * w + x]; },
            [&](int y, std::uint8_t, std::uint8_t mx) { col_max[static_cast<std::size_t>(y)] = mx; });
        for (int y = 0; y < h; ++y) {
            const int th4 = 3 * col_min[static_cast<std::size_t>(y)] + col_max[static_cast<std::size_t>(y)];
            out.at(x, y) = 4 * grey.at(x, y) < th4 ? Frame::kForeground : Frame::kBackground;
        }
    }
    return out;
}

std::string to_string(BinarizeMode mode) {
    switch (mode) {
        case BinarizeMode::Interpolated: return "interp";
        case BinarizeMode::Windowed: return "window";
        case BinarizeMode::Local: return "local";
        case BinarizeMode::Global: return "global";
    }
    return "?";
}

BinarizeMode parse_binarize_mode(const std::string& text) {
    if (text == "interp") return BinarizeMode::Interpolated;
    if (text == "window") return BinarizeMode::Windowed;
    if (text == "local") return BinarizeMode::Local;
    if (text == "global") return BinarizeMode::Global;
    throw ContractError("unknown binarize mode '" + text + "' (expected interp|window|local|global)");
}

ThresholdStream::ThresholdStream(int window, BinarizeMode mode) : window_(window), mode_(mode) {
    if (window < 2) throw ContractError("ThresholdStream: window must be >= 2");
    if (mode != BinarizeMode::Interpolated && mode != BinarizeMode::Windowed) {
        throw ContractError("ThresholdStream: only grid-based modes stream");
    }
}

ThresholdStream::Result ThresholdStream::push(const Frame& grey) {
    require_kind(grey, PixelKind::Grey, "ThresholdStream::push");
    if (last_index_ && grey.frame_index() <= *last_index_) {
        throw ContractError("ThresholdStream: frame index " + std::to_string(grey.frame_index()) +
                            " does not follow " + std::to_string(*last_index_));
    }
    ThresholdGrid current = compute_grid(grey, window_);
    const bool usable = previous_ && previous_->width == grey.width() && previous_->height == grey.height();
    ThresholdGrid used = usable ? std::move(*previous_) : current;
    Frame binary = mode_ == BinarizeMode::Interpolated ? apply_interpolated(grey, used) : apply_windowed(grey, used);
    previous_ = std::move(current);
    last_index_ = grey.frame_index();
    return {std::move(binary), std::move(used)};
}

void ThresholdStream::reset() {
    previous_.reset();
    last_index_.reset();
}

std::vector<Frame> stream_binarize(const std::vector<Frame>& frames, int window) {
    ThresholdStream stream(window);
    std::vector<Frame> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(stream.push(f).binary);
    return out;
}

}  // namespace padland
