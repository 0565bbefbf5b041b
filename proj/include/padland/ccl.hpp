// Single-pass connected component labeling with per-component statistics.
//
// Foreground runs are extracted row by row and merged with the overlapping runs
// of the previous row through union-find; area, bounding box and coordinate
// sums are folded into the surviving root at every union, so the pixel data is
// read exactly once.

#pragma once

#include "padland/frame.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace padland {

struct BoundingBox {
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive

    int width() const noexcept { return max_x - min_x + 1; }
    int height() const noexcept { return max_y - min_y + 1; }
    std::int64_t area() const noexcept { return static_cast<std::int64_t>(width()) * height(); }
    bool contains(const BoundingBox& inner) const noexcept {
        return inner.min_x >= min_x && inner.min_y >= min_y && inner.max_x <= max_x && inner.max_y <= max_y;
    }
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ComponentRecord {
    int label = 0;  // 1..K in output order
    std::int64_t area = 0;
    BoundingBox bbox;
    double cx = 0.0, cy = 0.0;  // mean member coordinates
    bool touches_border = false;
};

enum class Connectivity { Four = 4, Eight = 8 };

Connectivity parse_connectivity(int value);

struct LabelResult {
    /// Sorted by descending area, ties by (min_y, min_x).
    std::vector<ComponentRecord> components;
    /// Row-major label per pixel (0 = background); only filled on request.
    std::vector<std::int32_t> label_map;
};

LabelResult label_components(const Frame& binary, Connectivity connectivity = Connectivity::Eight,
                             bool want_label_map = false);

}  // namespace padland
