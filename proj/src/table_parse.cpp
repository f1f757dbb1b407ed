#include "focal/table_parse.hpp"

#include <algorithm>
#include <cmath>

#include "focal/errors.hpp"

namespace focal {

namespace {

// Grid rule positions usable as strip boundaries, filtered to rules spanning
// most of the table extent.
std::vector<int> rule_positions(const std::vector<LineSegment>& segments, int lo, int hi,
                                int min_span) {
    std::vector<int> positions;
    for (const LineSegment& s : segments) {
        if (s.position < lo || s.position > hi) continue;
        if (s.length() < min_span) continue;
        positions.push_back(s.position);
    }
    return positions;
}

// Ink bounding box of a mask; nullopt when blank.
std::optional<Region> ink_bbox(const BinaryMask& m) {
    int x1 = m.width, y1 = m.height, x2 = -1, y2 = -1;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.get(x, y)) continue;
            x1 = std::min(x1, x);
            y1 = std::min(y1, y);
            x2 = std::max(x2, x);
            y2 = std::max(y2, y);
        }
    }
    if (x2 < 0) return std::nullopt;
    return Region{x1, y1, x2, y2};
}

// Strip boundaries for a borderless table: centers of ink-free gaps of at
// least gap_min in the projection profile across [lo, hi], plus outer edges
// pushed out by half the median gap width — the observable stand-in for the
// invisible outer padding. `count` sums ink across the perpendicular extent.
template <typename CountAt>
std::vector<int> projection_boundaries(int lo, int hi, int gap_min, int limit, CountAt&& count) {
    std::vector<int> centers;
    std::vector<int> widths;
    int gap_start = -1;
    for (int i = lo + 1; i <= hi; ++i) {
        bool empty = count(i) == 0;
        if (empty && gap_start < 0) gap_start = i;
        if ((!empty || i == hi) && gap_start >= 0) {
            int gap_end = empty ? i : i - 1;
            if (gap_end - gap_start + 1 >= gap_min && gap_end < hi) {
                centers.push_back((gap_start + gap_end) / 2);
                widths.push_back(gap_end - gap_start + 1);
            }
            gap_start = -1;
        }
    }

    int margin = 0;
    if (!widths.empty()) {
        std::sort(widths.begin(), widths.end());
        margin = widths[widths.size() / 2] / 2;
    }
    std::vector<int> boundaries{std::max(0, lo - margin)};
    boundaries.insert(boundaries.end(), centers.begin(), centers.end());
    boundaries.push_back(std::min(limit, hi + margin));
    return boundaries;
}

std::vector<NamedRegion> strips_from_boundaries(const std::vector<int>& bounds,
                                                const std::vector<std::string>& names,
                                                const Region& extent, bool vertical_cuts) {
    std::vector<NamedRegion> out;
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        Region r = vertical_cuts ? Region{bounds[i], extent.y1, bounds[i + 1], extent.y2}
                                 : Region{extent.x1, bounds[i], extent.x2, bounds[i + 1]};
        out.push_back({names[i], r});
    }
    return out;
}

std::vector<std::string> row_names(int count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (int i = 1; i <= count; ++i) names.push_back("row_" + std::to_string(i));
    return names;
}

struct GridDetection {
    Region table_region;
    std::vector<int> col_bounds; // vertical rule positions, left to right
    std::vector<int> row_bounds; // horizontal rule positions, top to bottom
};

// Bordered path: opened line masks -> merged segments -> the grid whose frame
// matches the longest rules.
std::optional<GridDetection> detect_grid(const Raster& r, const BinaryMask& ink,
                                         const TableParseOptions& opt) {
    const int h_kernel = std::max(opt.min_kernel, r.width() / opt.kernel_divisor);
    const int v_kernel = std::max(opt.min_kernel, r.height() / opt.kernel_divisor);

    BinaryMask h_lines = morph_open_lines(ink, Orientation::horizontal, h_kernel);
    BinaryMask v_lines = morph_open_lines(ink, Orientation::vertical, v_kernel);
    auto h_segments = extract_line_segments(h_lines, Orientation::horizontal, h_kernel, opt.merge_gap);
    auto v_segments = extract_line_segments(v_lines, Orientation::vertical, v_kernel, opt.merge_gap);
    if (h_segments.size() < 2 || v_segments.size() < 2) return std::nullopt;

    auto longest = [](const std::vector<LineSegment>& segs) {
        return std::max_element(segs.begin(), segs.end(),
                                [](const LineSegment& a, const LineSegment& b) {
                                    if (a.length() != b.length()) return a.length() < b.length();
                                    return a.position > b.position; // prefer smaller position
                                });
    };
    const int longest_v = longest(v_segments)->length();
    const int longest_h = longest(h_segments)->length();

    // The grid region: bbox of the rule mask component whose vertical extent
    // matches the longest vertical rule.
    BinaryMask rules(ink.width, ink.height);
    for (size_t i = 0; i < rules.bits.size(); ++i) {
        rules.bits[i] = h_lines.bits[i] | v_lines.bits[i];
    }
    std::vector<Contour> rule_contours = find_contours(rules);
    const Contour* grid = nullptr;
    for (const Contour& c : rule_contours) {
        int tol = std::max(4, longest_v / 10);
        if (std::abs(c.bbox.height() - longest_v) <= tol &&
            std::abs(c.bbox.width() - longest_h) <= std::max(4, longest_h / 10)) {
            grid = &c;
            break;
        }
    }
    if (!grid) return std::nullopt;

    GridDetection det;
    det.table_region = grid->bbox;
    int min_v_span = int(opt.rule_span_fraction * det.table_region.height());
    int min_h_span = int(opt.rule_span_fraction * det.table_region.width());
    det.col_bounds = rule_positions(v_segments, det.table_region.x1, det.table_region.x2, min_v_span);
    det.row_bounds = rule_positions(h_segments, det.table_region.y1, det.table_region.y2, min_h_span);
    if (det.col_bounds.size() < 2 || det.row_bounds.size() < 2) return std::nullopt;
    return det;
}

TableLayout layout_from_bounds(const Region& table_region, const std::vector<int>& col_bounds,
                               const std::vector<int>& row_bounds,
                               const std::vector<std::string>& column_names, int row_count) {
    const int detected_cols = int(col_bounds.size()) - 1;
    const int detected_strips = int(row_bounds.size()) - 1;
    if (detected_cols != int(column_names.size())) {
        throw LayoutMismatchError("detected " + std::to_string(detected_cols) + " columns, expected " +
                                  std::to_string(column_names.size()));
    }
    // Strip count row_count+1 means a header strip precedes the data rows.
    bool has_header = detected_strips == row_count + 1;
    if (!has_header && detected_strips != row_count) {
        throw LayoutMismatchError("detected " + std::to_string(detected_strips) +
                                  " row strips, expected " + std::to_string(row_count) +
                                  " rows (+1 optional header)");
    }

    TableLayout layout;
    layout.table_region = table_region;
    layout.columns = strips_from_boundaries(col_bounds, disambiguate_names(column_names),
                                            table_region, /*vertical_cuts=*/true);
    std::vector<int> data_bounds = row_bounds;
    if (has_header) {
        layout.header_region = Region{table_region.x1, row_bounds[0], table_region.x2, row_bounds[1]};
        data_bounds.erase(data_bounds.begin());
    }
    layout.rows = strips_from_boundaries(data_bounds, row_names(row_count), table_region,
                                         /*vertical_cuts=*/false);
    return layout;
}

} // namespace

TableLayout infer_table_layout(const Raster& r, const std::vector<std::string>& column_names,
                               int row_count, const TableParseOptions& opt) {
    if (column_names.empty()) throw Error("column_names must be nonempty");
    if (row_count < 1) throw Error("row_count must be >= 1");

    BinaryMask ink = binarize(r, opt.binarize_threshold);
    std::optional<Region> bbox = ink_bbox(ink);
    if (!bbox) throw DetectionFailedError("no ink found in image");

    std::optional<LayoutMismatchError> grid_mismatch;
    if (auto grid = detect_grid(r, ink, opt)) {
        try {
            return layout_from_bounds(grid->table_region, grid->col_bounds, grid->row_bounds,
                                      column_names, row_count);
        } catch (const LayoutMismatchError& e) {
            grid_mismatch = e; // fall through to the projection profile
        }
    }

    // Borderless fallback: cut the text-mask projection profile at its gaps.
    const Region extent = *bbox;
    auto col_ink = [&](int x) {
        int n = 0;
        for (int y = extent.y1; y <= extent.y2; ++y) n += ink.get(x, y);
        return n;
    };
    auto row_ink = [&](int y) {
        int n = 0;
        for (int x = extent.x1; x <= extent.x2; ++x) n += ink.get(x, y);
        return n;
    };
    std::vector<int> col_bounds =
        projection_boundaries(extent.x1, extent.x2, opt.gap_min_cols, r.width() - 1, col_ink);
    std::vector<int> row_bounds =
        projection_boundaries(extent.y1, extent.y2, opt.gap_min_rows, r.height() - 1, row_ink);
    Region padded{col_bounds.front(), row_bounds.front(), col_bounds.back(), row_bounds.back()};

    try {
        return layout_from_bounds(padded, col_bounds, row_bounds, column_names, row_count);
    } catch (const LayoutMismatchError&) {
        if (grid_mismatch) throw *grid_mismatch;
        throw;
    }
}

std::vector<Contour> detect_subplot_candidates(const Raster& r, int k, int binarize_threshold) {
    if (k < 1) throw Error("k must be >= 1");
    std::vector<Contour> all = find_contours(binarize(r, binarize_threshold));
    std::vector<Contour> picked;
    for (const Contour& c : all) {
        if (int(picked.size()) >= k) break;
        bool duplicate = std::any_of(picked.begin(), picked.end(), [&](const Contour& p) {
            return region_iou(p.bbox, c.bbox) > 0.9;
        });
        if (!duplicate) picked.push_back(c);
    }
    return picked;
}

ChartLayout subplot_layout(const Raster& r, int k) {
    ChartLayout layout;
    layout.kind = ChartKind::multi_subplot;
    layout.plot_region = {0, 0, r.width() - 1, r.height() - 1};
    int index = 1;
    for (const Contour& c : detect_subplot_candidates(r, k)) {
        layout.subplots.push_back({"subplot_" + std::to_string(index++), c.bbox});
    }
    return layout;
}

std::vector<Region> bar_regions_from_axis(const ChartLayout& layout,
                                          const std::vector<std::string>& labels) {
    if (layout.kind == ChartKind::multi_subplot) {
        throw TargetClassMismatchError("bar regions require a bar chart layout");
    }
    const auto& entries = layout.axis_entries;
    const bool vertical = layout.kind == ChartKind::vertical_bar;

    std::vector<int> centers;
    centers.reserve(entries.size());
    for (const NamedRegion& e : entries) {
        centers.push_back(vertical ? (e.region.x1 + e.region.x2) / 2
                                   : (e.region.y1 + e.region.y2) / 2);
    }

    std::vector<Region> out;
    out.reserve(labels.size());
    for (const std::string& label : labels) {
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const NamedRegion& e) { return e.name == label; });
        if (it == entries.end()) {
            std::vector<std::string> available;
            for (const NamedRegion& e : entries) available.push_back(e.name);
            throw UnknownLabelError(label, available);
        }
        size_t i = size_t(it - entries.begin());
        if (vertical) {
            int lo = i == 0 ? layout.plot_region.x1 : (centers[i - 1] + centers[i]) / 2;
            int hi = i + 1 == centers.size() ? layout.plot_region.x2
                                             : (centers[i] + centers[i + 1]) / 2;
            out.push_back({lo, layout.plot_region.y1, hi, layout.plot_region.y2});
        } else {
            int lo = i == 0 ? layout.plot_region.y1 : (centers[i - 1] + centers[i]) / 2;
            int hi = i + 1 == centers.size() ? layout.plot_region.y2
                                             : (centers[i] + centers[i + 1]) / 2;
            out.push_back({layout.plot_region.x1, lo, layout.plot_region.x2, hi});
        }
    }
    return out;
}

} // namespace focal
