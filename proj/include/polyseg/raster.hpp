// Scanline rasterization of curve sets into labeled region masks.
#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "polyseg/geometry.hpp"

namespace polyseg {

struct LabelMask {
    int width = 0;
    int height = 0;
    int num_labels = 0;  // foreground labels 1..num_labels; background is 0
    std::vector<int32_t> labels;

    int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    int32_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
};

// Pixel (x, y) covers [x, x+1) x [y, y+1); its center is (x+0.5, y+0.5).
// A center is foreground iff a ray to +infinity crosses the union of all
// curves an odd number of times (even-odd rule, half-open in y so vertices
// on a scanline are not double counted).
inline std::vector<uint8_t> rasterize_binary(const CurveSet& cs, int width, int height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("rasterize: dimensions must be positive");
    std::vector<uint8_t> mask(static_cast<std::size_t>(width) * height, 0);
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double cy = y + 0.5;
        xs.clear();
        for (const Polygon& poly : cs.curves) {
            for (std::size_t e = 0; e < poly.size(); ++e) {
                const Point& a = poly[e];
                const Point& b = poly[poly.next(e)];
                if ((a.y <= cy && cy < b.y) || (b.y <= cy && cy < a.y)) {
                    xs.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // centers cx with xs[k] <= cx < xs[k+1]
            int px = static_cast<int>(std::ceil(xs[k] - 0.5));
            int pe = static_cast<int>(std::ceil(xs[k + 1] - 0.5));
            px = std::max(px, 0);
            pe = std::min(pe, width);
            for (int x = px; x < pe; ++x) mask[static_cast<std::size_t>(y) * width + x] = 1;
        }
    }
    return mask;
}

// Foreground partitioned into 4-connected components labeled 1..N in scan
// order; background stays 0. Nested curves yield annulus components, disjoint
// curves separate components.
inline LabelMask rasterize_labels(const CurveSet& cs, int width, int height) {
    const std::vector<uint8_t> fg = rasterize_binary(cs, width, height);
    LabelMask m;
    m.width = width;
    m.height = height;
    m.labels.assign(fg.size(), 0);

    int next_label = 0;
    std::queue<std::pair<int, int>> q;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * width + x;
            if (!fg[idx] || m.labels[idx] != 0) continue;
            ++next_label;
            m.labels[idx] = next_label;
            q.push({x, y});
            while (!q.empty()) {
                const auto [cx, cy] = q.front();
                q.pop();
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= width || ny[k] < 0 || ny[k] >= height) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny[k]) * width + nx[k];
                    if (fg[nidx] && m.labels[nidx] == 0) {
                        m.labels[nidx] = next_label;
                        q.push({nx[k], ny[k]});
                    }
                }
            }
        }
    }
    m.num_labels = next_label;
    return m;
}

// Component count over an arbitrary predicate mask (used by tests and the
// CLI to check hole topology of final masks).
inline int count_components_4(const std::vector<uint8_t>& mask, int width, int height) {
    std::vector<uint8_t> seen(mask.size(), 0);
    int count = 0;
    std::queue<std::pair<int, int>> q;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * width + x;
            if (!mask[idx] || seen[idx]) continue;
            ++count;
            seen[idx] = 1;
            q.push({x, y});
            while (!q.empty()) {
                const auto [cx, cy] = q.front();
                q.pop();
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= width || ny[k] < 0 || ny[k] >= height) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny[k]) * width + nx[k];
                    if (mask[nidx] && !seen[nidx]) {
                        seen[nidx] = 1;
                        q.push({nx[k], ny[k]});
                    }
                }
            }
        }
    }
    return count;
}

}  // namespace polyseg
