// Minimal PNG codec over zlib. Decodes any standard non-private PNG
// (bit depths 1/2/4/8/16, color types 0/2/3/4/6, Adam7 interlace) to RGBA8.
// Encodes 8-bit RGBA, non-interlaced, filter 0 rows.

#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>

#include "focal/errors.hpp"
#include "focal/raster.hpp"

namespace focal {

namespace {

constexpr uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

uint32_t read_u32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void write_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

uint32_t crc32_of(std::span<const uint8_t> data) {
    return uint32_t(::crc32(0L, data.data(), uInt(data.size())));
}

std::vector<uint8_t> zlib_inflate(std::span<const uint8_t> data, size_t expected_size) {
    std::vector<uint8_t> out;
    out.resize(expected_size);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw DecodeError("zlib init failed");
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = uInt(data.size());
    zs.next_out = out.data();
    zs.avail_out = uInt(out.size());
    int rc = inflate(&zs, Z_FINISH);
    size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size) {
        throw DecodeError("corrupt or truncated PNG image data");
    }
    return out;
}

std::vector<uint8_t> zlib_deflate(std::span<const uint8_t> data) {
    uLong bound = compressBound(uLong(data.size()));
    std::vector<uint8_t> out(bound);
    uLongf out_len = bound;
    if (compress2(out.data(), &out_len, data.data(), uLong(data.size()), 6) != Z_OK) {
        throw Error("zlib compression failed");
    }
    out.resize(out_len);
    return out;
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

void unfilter_scanlines(std::vector<uint8_t>& raw, size_t rows, size_t row_bytes, size_t bpp) {
    // In place: each row is [filter_byte, row_bytes...].
    const size_t stride = row_bytes + 1;
    for (size_t y = 0; y < rows; ++y) {
        uint8_t* row = raw.data() + y * stride;
        const uint8_t filter = row[0];
        uint8_t* cur = row + 1;
        const uint8_t* prev = (y > 0) ? raw.data() + (y - 1) * stride + 1 : nullptr;
        switch (filter) {
        case 0:
            break;
        case 1:
            for (size_t i = bpp; i < row_bytes; ++i) cur[i] = uint8_t(cur[i] + cur[i - bpp]);
            break;
        case 2:
            if (prev) {
                for (size_t i = 0; i < row_bytes; ++i) cur[i] = uint8_t(cur[i] + prev[i]);
            }
            break;
        case 3:
            for (size_t i = 0; i < row_bytes; ++i) {
                int left = (i >= bpp) ? cur[i - bpp] : 0;
                int up = prev ? prev[i] : 0;
                cur[i] = uint8_t(cur[i] + (left + up) / 2);
            }
            break;
        case 4:
            for (size_t i = 0; i < row_bytes; ++i) {
                int left = (i >= bpp) ? cur[i - bpp] : 0;
                int up = prev ? prev[i] : 0;
                int upleft = (prev && i >= bpp) ? prev[i - bpp] : 0;
                cur[i] = uint8_t(cur[i] + paeth(left, up, upleft));
            }
            break;
        default:
            throw DecodeError("unknown PNG filter type");
        }
    }
}

struct PngHeader {
    uint32_t width = 0;
    uint32_t height = 0;
    int bit_depth = 0;
    int color_type = 0;
    int interlace = 0;
};

int samples_per_pixel(int color_type) {
    switch (color_type) {
    case 0: return 1; // grayscale
    case 2: return 3; // rgb
    case 3: return 1; // palette index
    case 4: return 2; // gray + alpha
    case 6: return 4; // rgba
    default: throw DecodeError("unsupported PNG color type");
    }
}

// Reads sample i of a packed scanline at the given bit depth.
uint32_t read_sample(const uint8_t* row, size_t i, int bit_depth) {
    switch (bit_depth) {
    case 1: return (row[i / 8] >> (7 - i % 8)) & 0x1;
    case 2: return (row[i / 4] >> (6 - 2 * (i % 4))) & 0x3;
    case 4: return (row[i / 2] >> (4 - 4 * (i % 2))) & 0xf;
    case 8: return row[i];
    case 16: return (uint32_t(row[2 * i]) << 8) | row[2 * i + 1];
    default: throw DecodeError("unsupported PNG bit depth");
    }
}

// Scales a sample to 8 bits (16-bit takes the high byte).
uint8_t to8(uint32_t v, int bit_depth) {
    switch (bit_depth) {
    case 1: return v ? 255 : 0;
    case 2: return uint8_t(v * 85);
    case 4: return uint8_t(v * 17);
    case 8: return uint8_t(v);
    case 16: return uint8_t(v >> 8);
    default: return 0;
    }
}

struct Palette {
    std::vector<std::array<uint8_t, 3>> entries;
    std::vector<uint8_t> alpha; // tRNS, may be shorter than entries
};

// Writes one deinterlaced sub-image into the RGBA output.
void emit_pixels(Raster& out, const PngHeader& hdr, const Palette& pal,
                 const std::vector<uint8_t>& raw, uint32_t pass_w, uint32_t pass_h,
                 uint32_t x0, uint32_t dx, uint32_t y0, uint32_t dy) {
    const int spp = samples_per_pixel(hdr.color_type);
    const size_t row_bytes = (size_t(pass_w) * spp * hdr.bit_depth + 7) / 8;
    const size_t stride = row_bytes + 1;
    for (uint32_t ry = 0; ry < pass_h; ++ry) {
        const uint8_t* row = raw.data() + ry * stride + 1;
        uint32_t y = y0 + ry * dy;
        for (uint32_t rx = 0; rx < pass_w; ++rx) {
            uint32_t x = x0 + rx * dx;
            Color c;
            switch (hdr.color_type) {
            case 0: {
                uint8_t v = to8(read_sample(row, rx, hdr.bit_depth), hdr.bit_depth);
                c = {v, v, v, 255};
                break;
            }
            case 2: {
                c = {to8(read_sample(row, rx * 3, hdr.bit_depth), hdr.bit_depth),
                     to8(read_sample(row, rx * 3 + 1, hdr.bit_depth), hdr.bit_depth),
                     to8(read_sample(row, rx * 3 + 2, hdr.bit_depth), hdr.bit_depth), 255};
                break;
            }
            case 3: {
                uint32_t idx = read_sample(row, rx, hdr.bit_depth);
                if (idx >= pal.entries.size()) throw DecodeError("palette index out of range");
                uint8_t a = idx < pal.alpha.size() ? pal.alpha[idx] : 255;
                c = {pal.entries[idx][0], pal.entries[idx][1], pal.entries[idx][2], a};
                break;
            }
            case 4: {
                uint8_t v = to8(read_sample(row, rx * 2, hdr.bit_depth), hdr.bit_depth);
                uint8_t a = to8(read_sample(row, rx * 2 + 1, hdr.bit_depth), hdr.bit_depth);
                c = {v, v, v, a};
                break;
            }
            case 6: {
                c = {to8(read_sample(row, rx * 4, hdr.bit_depth), hdr.bit_depth),
                     to8(read_sample(row, rx * 4 + 1, hdr.bit_depth), hdr.bit_depth),
                     to8(read_sample(row, rx * 4 + 2, hdr.bit_depth), hdr.bit_depth),
                     to8(read_sample(row, rx * 4 + 3, hdr.bit_depth), hdr.bit_depth)};
                break;
            }
            }
            out.set(int(x), int(y), c);
        }
    }
}

// Adam7 pass geometry: x origin, x step, y origin, y step.
constexpr uint32_t kAdam7[7][4] = {
    {0, 8, 0, 8}, {4, 8, 0, 8}, {0, 4, 4, 8}, {2, 4, 0, 4},
    {0, 2, 2, 4}, {1, 2, 0, 2}, {0, 1, 1, 2},
};

} // namespace

Raster load_png(std::span<const uint8_t> bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
        throw DecodeError("not a PNG file");
    }

    PngHeader hdr;
    Palette pal;
    std::vector<uint8_t> idat;
    bool seen_ihdr = false, seen_iend = false;

    size_t pos = 8;
    while (pos + 12 <= bytes.size() && !seen_iend) {
        uint32_t len = read_u32(&bytes[pos]);
        if (pos + 12 + size_t(len) > bytes.size()) throw DecodeError("truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const uint8_t* data = &bytes[pos + 8];

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw DecodeError("bad IHDR length");
            hdr.width = read_u32(data);
            hdr.height = read_u32(data + 4);
            hdr.bit_depth = data[8];
            hdr.color_type = data[9];
            if (data[10] != 0 || data[11] != 0) throw DecodeError("unsupported compression/filter method");
            hdr.interlace = data[12];
            if (hdr.interlace > 1) throw DecodeError("unsupported interlace method");
            if (hdr.width == 0 || hdr.height == 0) throw DecodeError("zero PNG dimension");
            if (hdr.width > (1u << 24) || hdr.height > (1u << 24)) throw DecodeError("PNG too large");
            samples_per_pixel(hdr.color_type); // validates color type
            seen_ihdr = true;
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            if (len % 3 != 0) throw DecodeError("bad PLTE length");
            for (uint32_t i = 0; i < len; i += 3) {
                pal.entries.push_back({data[i], data[i + 1], data[i + 2]});
            }
        } else if (std::memcmp(type, "tRNS", 4) == 0) {
            if (hdr.color_type == 3) {
                pal.alpha.assign(data, data + len);
            }
            // tRNS color keys for gray/rgb are rare in this pipeline; ignored.
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            seen_iend = true;
        }
        pos += 12 + len;
    }
    if (!seen_ihdr) throw DecodeError("missing IHDR");
    if (idat.empty()) throw DecodeError("missing IDAT");
    if (hdr.color_type == 3 && pal.entries.empty()) throw DecodeError("palette image without PLTE");

    const int spp = samples_per_pixel(hdr.color_type);
    const size_t bpp = std::max<size_t>(1, size_t(spp) * hdr.bit_depth / 8);

    Raster out(int(hdr.width), int(hdr.height), {0, 0, 0, 0});

    if (hdr.interlace == 0) {
        size_t row_bytes = (size_t(hdr.width) * spp * hdr.bit_depth + 7) / 8;
        size_t expected = (row_bytes + 1) * hdr.height;
        std::vector<uint8_t> raw = zlib_inflate(idat, expected);
        unfilter_scanlines(raw, hdr.height, row_bytes, bpp);
        emit_pixels(out, hdr, pal, raw, hdr.width, hdr.height, 0, 1, 0, 1);
    } else {
        // Adam7: one filtered sub-image per non-empty pass, concatenated.
        size_t expected = 0;
        for (const auto& p : kAdam7) {
            uint32_t pw = (hdr.width > p[0]) ? (hdr.width - p[0] + p[1] - 1) / p[1] : 0;
            uint32_t ph = (hdr.height > p[2]) ? (hdr.height - p[2] + p[3] - 1) / p[3] : 0;
            if (pw == 0 || ph == 0) continue;
            expected += ((size_t(pw) * spp * hdr.bit_depth + 7) / 8 + 1) * ph;
        }
        std::vector<uint8_t> raw = zlib_inflate(idat, expected);
        size_t off = 0;
        for (const auto& p : kAdam7) {
            uint32_t pw = (hdr.width > p[0]) ? (hdr.width - p[0] + p[1] - 1) / p[1] : 0;
            uint32_t ph = (hdr.height > p[2]) ? (hdr.height - p[2] + p[3] - 1) / p[3] : 0;
            if (pw == 0 || ph == 0) continue;
            size_t row_bytes = (size_t(pw) * spp * hdr.bit_depth + 7) / 8;
            size_t pass_size = (row_bytes + 1) * ph;
            std::vector<uint8_t> pass(raw.begin() + off, raw.begin() + off + pass_size);
            unfilter_scanlines(pass, ph, row_bytes, bpp);
            emit_pixels(out, hdr, pal, pass, pw, ph, p[0], p[1], p[2], p[3]);
            off += pass_size;
        }
    }

    return out;
}

std::vector<uint8_t> save_png(const Raster& r) {
    const size_t row_bytes = size_t(r.width()) * 4;
    std::vector<uint8_t> raw;
    raw.reserve((row_bytes + 1) * r.height());
    for (int y = 0; y < r.height(); ++y) {
        raw.push_back(0); // filter: none
        const uint8_t* row = r.bytes().data() + size_t(y) * row_bytes;
        raw.insert(raw.end(), row, row + row_bytes);
    }
    std::vector<uint8_t> compressed = zlib_deflate(raw);

    std::vector<uint8_t> out(kSignature, kSignature + 8);
    auto chunk = [&out](const char* type, std::span<const uint8_t> payload) {
        write_u32(out, uint32_t(payload.size()));
        std::vector<uint8_t> body(type, type + 4);
        body.insert(body.end(), payload.begin(), payload.end());
        out.insert(out.end(), body.begin(), body.end());
        write_u32(out, crc32_of(body));
    };

    std::vector<uint8_t> ihdr;
    write_u32(ihdr, uint32_t(r.width()));
    write_u32(ihdr, uint32_t(r.height()));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(6); // RGBA
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    chunk("IHDR", ihdr);
    chunk("IDAT", compressed);
    chunk("IEND", {});
    return out;
}

Raster load_png_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_png(bytes);
}

void save_png_file(const Raster& r, const std::string& path) {
    std::vector<uint8_t> bytes = save_png(r);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw StorageError("short write to " + path);
}

} // namespace focal
