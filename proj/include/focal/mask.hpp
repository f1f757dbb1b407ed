#pragma once

#include <cstdint>
#include <vector>

#include "focal/raster.hpp"

namespace focal {

/// Row-major boolean image; 1 = foreground (ink).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(size_t(w) * h, 0) {}

    bool get(int x, int y) const { return bits[size_t(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[size_t(y) * width + x] = v ? 1 : 0; }

    size_t foreground_count() const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Foreground iff ITU-R 601 luminance, rounded, is strictly below threshold.
/// Structured images are dark ink on a light ground; 200 is the working default.
BinaryMask binarize(const Raster& r, int threshold = 200);

} // namespace focal
