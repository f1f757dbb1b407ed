#pragma once

#include <algorithm>
#include <optional>

namespace focal {

/// Integer pixel rectangle, inclusive on all four edges. Corners may arrive
/// in any order; normalized() puts them in x1<=x2, y1<=y2 form. Clamping to
/// an image happens at use, never at construction.
struct Region {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    Region normalized() const {
        return {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
    }

    // Normalize, then intersect with [0,width) x [0,height). Empty -> nullopt.
    std::optional<Region> clamped(int width, int height) const {
        Region n = normalized();
        Region c{std::max(n.x1, 0), std::max(n.y1, 0),
                 std::min(n.x2, width - 1), std::min(n.y2, height - 1)};
        if (c.x1 > c.x2 || c.y1 > c.y2) return std::nullopt;
        return c;
    }

    int width() const { return x2 - x1 + 1; }
    int height() const { return y2 - y1 + 1; }
    long long area() const { return static_cast<long long>(width()) * height(); }

    bool contains(int x, int y) const { return x >= x1 && x <= x2 && y >= y1 && y <= y2; }

    Region united(const Region& other) const {
        return {std::min(x1, other.x1), std::min(y1, other.y1),
                std::max(x2, other.x2), std::max(y2, other.y2)};
    }

    friend bool operator==(const Region&, const Region&) = default;
};

/// Intersection-over-union of two normalized regions (inclusive-edge pixel counts).
double region_iou(const Region& a, const Region& b);

} // namespace focal
