#include "padland/ccl.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace padland {

Connectivity parse_connectivity(int value) {
    if (value == 4) return Connectivity::Four;
    if (value == 8) return Connectivity::Eight;
    throw ContractError("connectivity must be 4 or 8, got " + std::to_string(value));
}

namespace {

struct Run {
    int x0, x1, y;
    std::int32_t label;  // provisional
};

struct Stats {
    std::int64_t area = 0;
    std::int64_t sum_x = 0, sum_y = 0;
    BoundingBox bbox;
    bool touches_border = false;

    void fold(const Stats& o) {
        area += o.area;
        sum_x += o.sum_x;
        sum_y += o.sum_y;
        bbox.min_x = std::min(bbox.min_x, o.bbox.min_x);
        bbox.min_y = std::min(bbox.min_y, o.bbox.min_y);
        bbox.max_x = std::max(bbox.max_x, o.bbox.max_x);
        bbox.max_y = std::max(bbox.max_y, o.bbox.max_y);
        touches_border = touches_border || o.touches_border;
    }
};

class Equivalences {
public:
    std::int32_t make(const Stats& s) {
        parent_.push_back(static_cast<std::int32_t>(parent_.size()));
        stats_.push_back(s);
        return parent_.back();
    }

    std::int32_t find(std::int32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        stats_[a].fold(stats_[b]);
    }

    std::size_t size() const { return parent_.size(); }
    bool is_root(std::int32_t a) const { return parent_[a] == a; }
    const Stats& stats(std::int32_t root) const { return stats_[root]; }

private:
    std::vector<std::int32_t> parent_;
    std::vector<Stats> stats_;
};

}  // namespace

LabelResult label_components(const Frame& binary, Connectivity connectivity, bool want_label_map) {
    require_kind(binary, PixelKind::Binary, "label_components");
    const int w = binary.width(), h = binary.height();
    const int reach = connectivity == Connectivity::Eight ? 1 : 0;

    Equivalences eq;
    std::vector<Run> all_runs;  // only kept for the label map
    std::vector<Run> prev, cur;

    for (int y = 0; y < h; ++y) {
        cur.clear();
        const auto row = binary.row(y);
        for (int x = 0; x < w;) {
            if (!row[x]) {
                ++x;
                continue;
            }
            const int x0 = x;
            while (x < w && row[x]) ++x;
            const int x1 = x - 1;
            Stats s;
            const std::int64_t len = x1 - x0 + 1;
            s.area = len;
            s.sum_x = (static_cast<std::int64_t>(x0) + x1) * len / 2;
            s.sum_y = static_cast<std::int64_t>(y) * len;
            s.bbox = {x0, y, x1, y};
            s.touches_border = x0 == 0 || x1 == w - 1 || y == 0 || y == h - 1;
            cur.push_back({x0, x1, y, eq.make(s)});
        }

        // Both run lists are sorted by x; advance a window over prev.
        std::size_t p = 0;
        for (const auto& run : cur) {
            while (p < prev.size() && prev[p].x1 + reach < run.x0) ++p;
            for (std::size_t q = p; q < prev.size() && prev[q].x0 <= run.x1 + reach; ++q) {
                eq.unite(run.label, prev[q].label);
            }
        }
        if (want_label_map) all_runs.insert(all_runs.end(), cur.begin(), cur.end());
        std::swap(prev, cur);
    }

    // Merge resolution over the equivalence table.
    std::vector<std::int32_t> roots;
    for (std::size_t i = 0; i < eq.size(); ++i) {
        if (eq.is_root(static_cast<std::int32_t>(i))) roots.push_back(static_cast<std::int32_t>(i));
    }
    std::sort(roots.begin(), roots.end(), [&](std::int32_t a, std::int32_t b) {
        const auto& sa = eq.stats(a);
        const auto& sb = eq.stats(b);
        if (sa.area != sb.area) return sa.area > sb.area;
        if (sa.bbox.min_y != sb.bbox.min_y) return sa.bbox.min_y < sb.bbox.min_y;
        return sa.bbox.min_x < sb.bbox.min_x;
    });

    LabelResult result;
    result.components.reserve(roots.size());
    std::vector<std::int32_t> final_label(want_label_map ? eq.size() : 0, 0);
    for (std::size_t k = 0; k < roots.size(); ++k) {
        const auto& s = eq.stats(roots[k]);
        ComponentRecord rec;
        rec.label = static_cast<int>(k + 1);
        rec.area = s.area;
        rec.bbox = s.bbox;
        rec.cx = static_cast<double>(s.sum_x) / static_cast<double>(s.area);
        rec.cy = static_cast<double>(s.sum_y) / static_cast<double>(s.area);
        rec.touches_border = s.touches_border;
        result.components.push_back(rec);
        if (want_label_map) final_label[roots[k]] = rec.label;
    }

    if (want_label_map) {
        result.label_map.assign(binary.pixel_count(), 0);
        for (const auto& run : all_runs) {
            const auto label = final_label[eq.find(run.label)];
            auto* dst = result.label_map.data() + static_cast<std::size_t>(run.y) * w;
            std::fill(dst + run.x0, dst + run.x1 + 1, label);
        }
    }
    return result;
}

}  // namespace padland
