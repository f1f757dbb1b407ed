#include "focal/raster.hpp"

#include <cstdio>
#include <cstring>

#include "focal/digest.hpp"
#include "focal/errors.hpp"

namespace focal {

double region_iou(const Region& a, const Region& b) {
    int ix1 = std::max(a.x1, b.x1);
    int iy1 = std::max(a.y1, b.y1);
    int ix2 = std::min(a.x2, b.x2);
    int iy2 = std::min(a.y2, b.y2);
    if (ix1 > ix2 || iy1 > iy2) return 0.0;
    double inter = double(ix2 - ix1 + 1) * double(iy2 - iy1 + 1);
    double uni = double(a.area()) + double(b.area()) - inter;
    return inter / uni;
}

Raster::Raster(int width, int height, Color fill)
    : width_(width), height_(height), pixels_(static_cast<size_t>(width) * height * 4) {
    if (width < 1 || height < 1) throw Error("raster dimensions must be >= 1");
    for (size_t i = 0; i < pixels_.size(); i += 4) {
        pixels_[i] = fill.r;
        pixels_[i + 1] = fill.g;
        pixels_[i + 2] = fill.b;
        pixels_[i + 3] = fill.a;
    }
}

namespace {

Region require_clamped(const Raster& r, const Region& region) {
    auto c = region.clamped(r.width(), r.height());
    if (!c) throw EmptyRegionError();
    return *c;
}

// round(x / 255) with round-half-up; x in [0, 255*255 + 255].
inline uint8_t div255_round(int x) {
    return static_cast<uint8_t>((2 * x + 255) / 510);
}

inline void blend_pixel(uint8_t* p, Color c) {
    const int ca = c.a;
    const int ia = 255 - ca;
    p[0] = div255_round(c.r * ca + p[0] * ia);
    p[1] = div255_round(c.g * ca + p[1] * ia);
    p[2] = div255_round(c.b * ca + p[2] * ia);
    p[3] = div255_round(255 * ca + p[3] * ia);
}

} // namespace

Raster fill_opaque(const Raster& r, const Region& region, Color c) {
    Region box = require_clamped(r, region);
    Raster out = r;
    for (int y = box.y1; y <= box.y2; ++y) {
        for (int x = box.x1; x <= box.x2; ++x) {
            out.set(x, y, {c.r, c.g, c.b, 255});
        }
    }
    return out;
}

Raster composite_overlay(const Raster& r, const Region& region, Color c) {
    Region box = require_clamped(r, region);
    Raster out = r;
    for (int y = box.y1; y <= box.y2; ++y) {
        uint8_t* row = out.bytes().data() + (static_cast<size_t>(y) * r.width() + box.x1) * 4;
        for (int x = box.x1; x <= box.x2; ++x, row += 4) {
            blend_pixel(row, c);
        }
    }
    return out;
}

Raster composite_overlay_union(const Raster& r, std::span<const Region> regions, Color c) {
    if (regions.empty()) throw EmptyRegionError("no regions to composite");
    // Coverage mask so pixels under overlapping regions blend exactly once,
    // matching a single overlay layer composited in one pass.
    std::vector<Region> boxes;
    boxes.reserve(regions.size());
    for (const Region& region : regions) {
        boxes.push_back(require_clamped(r, region));
    }
    std::vector<uint8_t> covered(static_cast<size_t>(r.width()) * r.height(), 0);
    for (const Region& box : boxes) {
        for (int y = box.y1; y <= box.y2; ++y) {
            std::memset(covered.data() + static_cast<size_t>(y) * r.width() + box.x1, 1,
                        static_cast<size_t>(box.width()));
        }
    }
    Raster out = r;
    uint8_t* px = out.bytes().data();
    for (size_t i = 0; i < covered.size(); ++i) {
        if (covered[i]) blend_pixel(px + i * 4, c);
    }
    return out;
}

Raster draw_rect_outline(const Raster& r, const Region& region, Color c, int thickness) {
    if (thickness < 1) throw Error("outline thickness must be >= 1");
    Region box = require_clamped(r, region);
    Raster out = r;
    const Color paint{c.r, c.g, c.b, 255};
    for (int y = box.y1; y <= box.y2; ++y) {
        for (int x = box.x1; x <= box.x2; ++x) {
            bool on_frame = (x - box.x1 < thickness) || (box.x2 - x < thickness) ||
                            (y - box.y1 < thickness) || (box.y2 - y < thickness);
            if (on_frame) out.set(x, y, paint);
        }
    }
    return out;
}

std::string pixel_digest(const Raster& r) {
    Sha256 h;
    char header[32];
    std::snprintf(header, sizeof(header), "rgba8:%dx%d:", r.width(), r.height());
    h.update(std::string_view(header));
    h.update(std::span<const uint8_t>(r.bytes().data(), r.bytes().size()));
    return h.hex_digest();
}

} // namespace focal
