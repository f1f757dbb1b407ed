#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "focal/layout.hpp"
#include "focal/raster.hpp"

namespace focal {

/// The closed editing-tool enumeration: {highlight, mask-keep, draw} for each
/// of the five target classes.
enum class ToolId {
    highlight_columns,
    mask_columns_keep,
    draw_columns,
    highlight_rows,
    mask_rows_keep,
    draw_rows,
    highlight_bars_x,
    mask_bars_x_keep,
    draw_bars_x,
    highlight_bars_y,
    mask_bars_y_keep,
    draw_bars_y,
    highlight_subplots,
    mask_subplots_keep,
    draw_subplots,
};

enum class ToolMethod { highlight, mask_keep, draw };

ToolMethod tool_method(ToolId tool);
TargetClass tool_target_class(ToolId tool);

/// Registry entry: the surface function name a model calls, plus a one-line
/// doc for the prompt.
struct ToolInfo {
    std::string surface_name;
    ToolId tool;
    TargetClass target_class;
    std::string doc;
};

/// The 15 tools in stable order (class-major, highlight/mask/draw within).
/// Surface names are a compatibility contract with the call parser and the
/// prompt templates.
const std::vector<ToolInfo>& tool_registry();

std::optional<ToolId> tool_from_surface(const std::string& surface_name);
const ToolInfo& tool_info(ToolId tool);

/// Call shape shown to the model, e.g.
/// "focus_on_columns_with_highlight(image, columns_to_focus_on, all_columns_bounding_boxes)".
std::string tool_signature(ToolId tool);

/// Provenance of one edit. affected_regions are the focus targets (for
/// mask-keep tools: the kept regions); hashes are pixel digests of the input
/// and output rasters.
struct EditRecord {
    ToolId tool;
    std::vector<std::string> targets; // canonical labels
    std::vector<Region> affected_regions;
    std::string input_hash;
    std::string output_hash;
};

/// Executes one tool against a layout:
///   highlight_*  light-red overlay (255,0,0,50) over the union of targets
///   mask_*_keep  opaque white over every non-target region of the class;
///                table header strips are never masked
///   draw_*       3 px opaque red frame around each target
/// Targets resolve with the layout's exact -> case-insensitive ->
/// whitespace-normalized fallbacks. Throws UnknownTargetError or
/// EmptyTargetsError; a mask whose complement is empty is a no-op.
std::pair<Raster, EditRecord> apply_tool(const Raster& r, const StructureLayout& layout,
                                         ToolId tool, std::span<const std::string> targets);

} // namespace focal
