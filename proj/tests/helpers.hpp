// Shared test utilities: a deterministic RNG, a scalar compositing oracle,
// and a tiny PNG builder independent of the library encoder.
#pragma once

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "focal/raster.hpp"

namespace testutil {

// splitmix64; deterministic across platforms, unlike <random> distributions.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n), n >= 1.
    uint64_t below(uint64_t n) { return next() % n; }
    int range(int lo, int hi) { return lo + int(below(uint64_t(hi - lo + 1))); }
    bool chance(double p) { return double(next() >> 11) / double(1ull << 53) < p; }
};

// Reference source-over in double arithmetic, round half up. Deliberately a
// different code path from the integer math in the library.
inline focal::Color blend_oracle(focal::Color dst, focal::Color src) {
    double a = src.a / 255.0;
    auto ch = [&](double s, double d) {
        return uint8_t(std::floor(s * a + d * (1.0 - a) + 0.5));
    };
    return {ch(src.r, dst.r), ch(src.g, dst.g), ch(src.b, dst.b),
            uint8_t(std::floor(255.0 * a + dst.a * (1.0 - a) + 0.5))};
}

inline focal::Raster random_raster(Rng& rng, int w, int h) {
    focal::Raster r(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            r.set(x, y, {uint8_t(rng.below(256)), uint8_t(rng.below(256)),
                         uint8_t(rng.below(256)), uint8_t(rng.below(256))});
        }
    }
    return r;
}

// Minimal PNG writer used as a decode fixture source. Supports color types
// 0 (gray), 2 (rgb), 3 (palette) and 6 (rgba) at 8-bit depth, filter 0 rows,
// no interlace. Kept separate from the library so decoder tests do not feed
// the encoder its own output.
inline std::vector<uint8_t> build_png(int width, int height, int color_type,
                                      const std::vector<uint8_t>& samples,
                                      const std::vector<uint8_t>& palette = {}) {
    auto u32be = [](std::vector<uint8_t>& v, uint32_t x) {
        v.push_back(uint8_t(x >> 24));
        v.push_back(uint8_t(x >> 16));
        v.push_back(uint8_t(x >> 8));
        v.push_back(uint8_t(x));
    };
    int spp = color_type == 2 ? 3 : color_type == 6 ? 4 : 1;

    std::vector<uint8_t> raw;
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        const uint8_t* row = samples.data() + size_t(y) * width * spp;
        raw.insert(raw.end(), row, row + size_t(width) * spp);
    }
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<uint8_t> z(bound);
    compress2(z.data(), &bound, raw.data(), uLong(raw.size()), 9);
    z.resize(bound);

    std::vector<uint8_t> png{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    auto chunk = [&](const char* type, const std::vector<uint8_t>& payload) {
        u32be(png, uint32_t(payload.size()));
        std::vector<uint8_t> body(type, type + 4);
        body.insert(body.end(), payload.begin(), payload.end());
        png.insert(png.end(), body.begin(), body.end());
        u32be(png, uint32_t(crc32(0L, body.data(), uInt(body.size()))));
    };

    std::vector<uint8_t> ihdr;
    u32be(ihdr, uint32_t(width));
    u32be(ihdr, uint32_t(height));
    ihdr.insert(ihdr.end(), {8, uint8_t(color_type), 0, 0, 0});
    chunk("IHDR", ihdr);
    if (color_type == 3) chunk("PLTE", palette);
    chunk("IDAT", z);
    chunk("IEND", {});
    return png;
}

} // namespace testutil
