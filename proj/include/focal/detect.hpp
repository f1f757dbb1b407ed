#pragma once

#include <string>
#include <vector>

#include "focal/mask.hpp"
#include "focal/region.hpp"

namespace focal {

enum class Orientation { horizontal, vertical };

/// A detected straight rule. position is the row index for horizontal lines
/// and the column index for vertical ones; [start, end] spans along the line.
struct LineSegment {
    Orientation orientation = Orientation::horizontal;
    int position = 0;
    int start = 0;
    int end = 0;

    int length() const { return end - start + 1; }

    friend bool operator==(const LineSegment&, const LineSegment&) = default;
};

/// An 8-connected foreground component.
struct Contour {
    Region bbox;
    long long area = 0;            // foreground pixel count
    long long perimeter_length = 0; // pixels adjacent to background or border
};

/// Morphological opening with a 1xk (horizontal) or kx1 (vertical) segment:
/// only foreground runs of length >= kernel_length survive, at full length.
BinaryMask morph_open_lines(const BinaryMask& m, Orientation orientation, int kernel_length);

/// Maximal per-row/column runs of length >= min_length, merged across
/// parallel neighbors within merge_gap into one segment at the centroid
/// position. Result sorted by position.
std::vector<LineSegment> extract_line_segments(const BinaryMask& m, Orientation orientation,
                                               int min_length, int merge_gap = 2);

/// All 8-connected components, sorted by perimeter_length descending
/// (ties: bbox top-left ascending).
std::vector<Contour> find_contours(const BinaryMask& m);

} // namespace focal
