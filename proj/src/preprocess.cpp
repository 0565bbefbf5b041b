#include "padland/preprocess.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace padland {

Frame to_greyscale(const Frame& rgb) {
    require_kind(rgb, PixelKind::RGB, "to_greyscale");
    Frame out(rgb.width(), rgb.height(), PixelKind::Grey, rgb.frame_index());
    const auto src = rgb.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const std::uint32_t r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
        // Weights in thousandths; the sum is exact so +500 is round-half-up.
        dst[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
    return out;
}

Frame gaussian_5x5(const Frame& grey) {
    require_kind(grey, PixelKind::Grey, "gaussian_5x5");
    const int w = grey.width(), h = grey.height();
    auto clamp_y = [h](int y) { return std::clamp(y, 0, h - 1); };

    // Horizontal pass on a row padded by replication, sums up to 16*255.
    std::vector<std::uint16_t> tmp(grey.pixel_count());
    std::vector<std::uint16_t> padded(static_cast<std::size_t>(w) + 4);
    for (int y = 0; y < h; ++y) {
        const auto row = grey.row(y);
        padded[0] = padded[1] = row[0];
        for (int x = 0; x < w; ++x) padded[static_cast<std::size_t>(x) + 2] = row[x];
        padded[static_cast<std::size_t>(w) + 2] = padded[static_cast<std::size_t>(w) + 3] = row[w - 1];
        const std::uint16_t* p = padded.data();
        auto* t = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            t[x] = static_cast<std::uint16_t>(p[x] + 4 * p[x + 1] + 6 * p[x + 2] + 4 * p[x + 3] + p[x + 4]);
        }
    }

    Frame out(w, h, PixelKind::Grey, grey.frame_index());
    for (int y = 0; y < h; ++y) {
        const std::uint16_t* r[5];
        for (int k = 0; k < 5; ++k) r[k] = tmp.data() + static_cast<std::size_t>(clamp_y(y + k - 2)) * w;
        auto* dst = out.row(y).data();
        for (int x = 0; x < w; ++x) {
            const std::uint32_t sum = r[0][x] + 4u * r[1][x] + 6u * r[2][x] + 4u * r[3][x] + r[4][x];
            dst[x] = static_cast<std::uint8_t>((sum + 128) >> 8);
        }
    }
    return out;
}

namespace {

// Pixel is foreground when at least MinCount of the (2R+1)^2 window around it
// is foreground. Samples outside the image are background unless Replicate, in
// which case the edge repeats.
template <int R, bool Replicate, int MinCount>
Frame window_vote(const Frame& binary) {
    const int w = binary.width(), h = binary.height();
    // Column sums with R cells of padding on both sides.
    std::vector<std::uint8_t> column(static_cast<std::size_t>(w) + 2 * R);
    Frame out(w, h, PixelKind::Binary, binary.frame_index());
    const auto src = binary.data();

    for (int y = 0; y < h; ++y) {
        std::uint8_t* col = column.data() + R;
        std::fill(column.begin(), column.end(), 0);
        for (int k = -R; k <= R; ++k) {
            int sy = y + k;
            if constexpr (Replicate) {
                sy = std::clamp(sy, 0, h - 1);
            } else {
                if (sy < 0 || sy >= h) continue;
            }
            const auto* s = src.data() + static_cast<std::size_t>(sy) * w;
            for (int x = 0; x < w; ++x) col[x] = static_cast<std::uint8_t>(col[x] + (s[x] & 1));
        }
        if constexpr (Replicate) {
            for (int k = 1; k <= R; ++k) {
                col[-k] = col[0];
                col[w - 1 + k] = col[w - 1];
            }
        }
        auto* dst = out.row(y).data();
        for (int x = 0; x < w; ++x) {
            unsigned sum = 0;
            for (int k = -R; k <= R; ++k) sum += col[x + k];
            dst[x] = sum >= MinCount ? Frame::kForeground : Frame::kBackground;
        }
    }
    return out;
}

}  // namespace

Frame erode_3x3(const Frame& binary) {
    require_kind(binary, PixelKind::Binary, "erode_3x3");
    return window_vote<1, false, 9>(binary);
}

Frame median_5x5(const Frame& binary) {
    require_kind(binary, PixelKind::Binary, "median_5x5");
    return window_vote<2, true, 13>(binary);
}

Frame dilate_3x3(const Frame& binary) {
    require_kind(binary, PixelKind::Binary, "dilate_3x3");
    return window_vote<1, false, 1>(binary);
}

}  // namespace padland
