#include "focal/mask.hpp"

#include <cmath>
#include <numeric>

namespace focal {

size_t BinaryMask::foreground_count() const {
    return std::accumulate(bits.begin(), bits.end(), size_t{0});
}

BinaryMask binarize(const Raster& r, int threshold) {
    BinaryMask m(r.width(), r.height());
    const uint8_t* px = r.bytes().data();
    for (size_t i = 0; i < m.bits.size(); ++i, px += 4) {
        int lum = int(std::lround(0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]));
        m.bits[i] = lum < threshold ? 1 : 0;
    }
    return m;
}

} // namespace focal
