// Embedded 5x7 bitmap glyphs so rendered fixtures are byte-identical on every
// platform; no system fonts involved.
#pragma once

#include <cstdint>
#include <string>

#include "focal/raster.hpp"
#include "focal/region.hpp"

namespace focal::glyphs {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kLetterSpacing = 1; // columns between glyphs, pre-scale

/// Seven row bitmasks (bit 4 = leftmost pixel). Unknown characters render as
/// a filled block.
const uint8_t* glyph_rows(char c);

int text_width(const std::string& text, int scale);
inline int text_height(int scale) { return kGlyphHeight * scale; }

/// Draws text with its top-left corner at (x, y). Pixels outside the raster
/// are clipped.
void draw_text(Raster& r, int x, int y, const std::string& text, Color ink, int scale);

/// Bounding box draw_text would cover (independent of clipping).
Region text_bounds(int x, int y, const std::string& text, int scale);

} // namespace focal::glyphs
