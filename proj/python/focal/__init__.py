"""Structured-image focus editing toolkit.

Parse the visual structure of table and chart images into named regions,
apply focus edits (highlight, mask, draw) over those regions, and replay
recorded edit-and-reason episodes. The heavy lifting lives in the compiled
extension; layouts and records cross the boundary as their canonical JSON
strings.
"""

from focal._core import (
    FocalError,
    Raster,
    apply_tool,
    composite_overlay,
    detect_subplot_layout,
    detect_table_layout,
    draw_rect_outline,
    extract_calls,
    extract_final_answer,
    fill_opaque,
    has_answer_marker,
    load_png,
    load_png_file,
    pixel_digest,
    render_random_table,
    render_table,
    record_script,
    run_replay,
    save_png,
    save_png_file,
    score,
    tool_registry,
)

__all__ = [
    "FocalError",
    "Raster",
    "apply_tool",
    "composite_overlay",
    "detect_subplot_layout",
    "detect_table_layout",
    "draw_rect_outline",
    "extract_calls",
    "extract_final_answer",
    "fill_opaque",
    "has_answer_marker",
    "load_png",
    "load_png_file",
    "pixel_digest",
    "render_random_table",
    "render_table",
    "record_script",
    "run_replay",
    "save_png",
    "save_png_file",
    "score",
    "tool_registry",
]
