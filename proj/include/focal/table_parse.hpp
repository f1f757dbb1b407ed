#pragma once

#include <string>
#include <vector>

#include "focal/detect.hpp"
#include "focal/layout.hpp"
#include "focal/raster.hpp"

namespace focal {

struct TableParseOptions {
    int binarize_threshold = 200;
    // Rule kernel: max(min_kernel, extent / kernel_divisor) along the orientation.
    int min_kernel = 10;
    int kernel_divisor = 20;
    int merge_gap = 2;
    // A rule must span at least this fraction of the table extent to count
    // as a grid line.
    double rule_span_fraction = 0.8;
    // Borderless fallback: a column boundary is a run of >= gap_min_cols
    // ink-free pixel columns; rows use gap_min_rows.
    int gap_min_cols = 6;
    int gap_min_rows = 2;
};

/// Recover the table grid from a rendered table image. Column names come from
/// the caller (the dataset knows its header); detected column count must
/// match, and detected data-row count must equal row_count. Rules are found
/// by morphological opening; when no usable grid lines exist the borderless
/// fallback cuts the ink projection profile at its gaps.
///
/// Throws LayoutMismatchError on a count mismatch after fallbacks and
/// DetectionFailedError when no plausible grid is found at all.
TableLayout infer_table_layout(const Raster& r, const std::vector<std::string>& column_names,
                               int row_count, const TableParseOptions& opt = {});

/// Top-k contours by perimeter from the binarized raster, deduplicated by
/// bbox IoU > 0.9. These become the indexed subplot candidates a model
/// labels during the loop.
std::vector<Contour> detect_subplot_candidates(const Raster& r, int k,
                                               int binarize_threshold = 200);

/// Candidate contours wrapped as a multi-subplot layout with indexed names
/// ("subplot_1"...), ready for prompts and subplot tools. The model addresses
/// subplots by index since their meaning is only known to it.
ChartLayout subplot_layout(const Raster& r, int k = 10);

/// Full-height (vertical bars) or full-width (horizontal bars) strips for the
/// named axis entries, split midpoint-to-midpoint between neighbors. Order
/// follows the input labels. Labels must match axis entries exactly.
std::vector<Region> bar_regions_from_axis(const ChartLayout& layout,
                                          const std::vector<std::string>& labels);

} // namespace focal
