#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "focal/region.hpp"

namespace focal {

struct Color {
    uint8_t r = 0;
    uint8_t g = 0;
    uint8_t b = 0;
    uint8_t a = 255;

    friend bool operator==(const Color&, const Color&) = default;
};

inline constexpr Color kWhite{255, 255, 255, 255};
inline constexpr Color kBlack{0, 0, 0, 255};

/// Owned RGBA8 image buffer, flat row-major. Invariant: bytes.size() == w*h*4.
/// All editing operations are pure functions Raster -> Raster.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, Color fill = kWhite);

    int width() const { return width_; }
    int height() const { return height_; }

    Color at(int x, int y) const {
        const uint8_t* p = &pixels_[index(x, y)];
        return {p[0], p[1], p[2], p[3]};
    }

    void set(int x, int y, Color c) {
        uint8_t* p = &pixels_[index(x, y)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
        p[3] = c.a;
    }

    const std::vector<uint8_t>& bytes() const { return pixels_; }
    std::vector<uint8_t>& bytes() { return pixels_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    size_t index(int x, int y) const {
        return (static_cast<size_t>(y) * width_ + x) * 4;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> pixels_;
};

// -- Pixel-level editing primitives. Regions are normalized and clamped to the
//    raster at use; a region with no pixels after clamping raises EmptyRegionError.

/// Every pixel inside the region becomes (c.r, c.g, c.b, 255).
Raster fill_opaque(const Raster& r, const Region& region, Color c);

/// Source-over composite of c onto the region, once per covered pixel:
/// out = round(src*a + dst*(1-a)) per channel with a = c.a/255, round half up.
/// Alpha follows the same blend, so an opaque base stays opaque.
Raster composite_overlay(const Raster& r, const Region& region, Color c);

/// Like composite_overlay but over the union of several regions; overlapping
/// pixels are composited exactly once.
Raster composite_overlay_union(const Raster& r, std::span<const Region> regions, Color c);

/// Opaque frame of the given thickness grown inward from the clamped region
/// boundary. thickness >= the region extent degenerates to a full fill.
Raster draw_rect_outline(const Raster& r, const Region& region, Color c, int thickness);

/// Hex digest of dimensions plus pixel bytes; the content address used for
/// episode image files and edit records.
std::string pixel_digest(const Raster& r);

// -- PNG I/O. 8-bit RGBA on decode; grayscale/palette/RGB inputs are promoted
//    to RGBA with alpha 255. Encoding always writes 8-bit RGBA, so
//    load_png(save_png(r)) == r pixelwise.

Raster load_png(std::span<const uint8_t> bytes);
std::vector<uint8_t> save_png(const Raster& r);

Raster load_png_file(const std::string& path);
void save_png_file(const Raster& r, const std::string& path);

} // namespace focal
