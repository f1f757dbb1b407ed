#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "focal/region.hpp"

namespace focal {

/// One named region inside a layout.
struct NamedRegion {
    std::string name;
    Region region;

    friend bool operator==(const NamedRegion&, const NamedRegion&) = default;
};

/// Recovered table geometry. Columns are sorted left-to-right, rows
/// top-to-bottom; every region lies inside table_region. Row labels are
/// ordinal ("row_1"...) since their text is never read.
struct TableLayout {
    Region table_region;
    std::vector<NamedRegion> columns;
    std::vector<NamedRegion> rows;
    std::optional<Region> header_region;

    friend bool operator==(const TableLayout&, const TableLayout&) = default;
};

enum class ChartKind { horizontal_bar, vertical_bar, multi_subplot };

/// Chart geometry. axis_entries are x-value regions for vertical bars and
/// y-value regions for horizontal bars; subplots are indexed candidates
/// ("subplot_1"...) for multi-subplot figures.
struct ChartLayout {
    ChartKind kind = ChartKind::vertical_bar;
    Region plot_region;
    std::vector<NamedRegion> axis_entries;
    std::vector<NamedRegion> subplots;

    friend bool operator==(const ChartLayout&, const ChartLayout&) = default;
};

/// The classes a tool target can resolve against.
enum class TargetClass { columns, rows, bars_x, bars_y, subplots };

std::string to_string(TargetClass cls);
std::string to_string(ChartKind kind);
ChartKind chart_kind_from_string(const std::string& s);

/// Named-region map for one image: either a table or a chart layout.
///
/// Serializes to/from a canonical JSON form that is embedded verbatim in
/// prompts and in collected focus_areas records:
///
///   {"kind": "table",
///    "table_region": {"x1":..,"y1":..,"x2":..,"y2":..},
///    "header": {...},                          // optional
///    "columns": {"Team": {...}, "Wins": {...}},
///    "rows":    {"row_1": {...}}}
///
///   {"kind": "vertical_bar" | "horizontal_bar" | "multi_subplot",
///    "plot_region": {...},
///    "entries":  {"UK": {...}},                // bar kinds
///    "subplots": {"subplot_1": {...}}}         // multi_subplot
///
/// Map entries keep layout order (left-to-right / top-to-bottom).
class StructureLayout {
public:
    StructureLayout() = default;
    explicit StructureLayout(TableLayout table) : table_(std::move(table)) {}
    explicit StructureLayout(ChartLayout chart) : chart_(std::move(chart)) {}

    bool is_table() const { return table_.has_value(); }
    bool is_chart() const { return chart_.has_value(); }

    const TableLayout& table() const;
    const ChartLayout& chart() const;

    /// True when targets of the class can resolve against this layout.
    bool supports(TargetClass cls) const;

    /// The labels a target of the class may name, in layout order.
    std::vector<std::string> available_targets(TargetClass cls) const;

    /// Resolve a label to its canonical form: exact match, then
    /// case-insensitive, then whitespace-normalized. Throws
    /// UnknownTargetError when nothing matches and TargetClassMismatchError
    /// when the class does not apply to this layout.
    std::string resolve_target(TargetClass cls, const std::string& label) const;

    /// Region of a canonical label (bar classes return the label's axis-entry
    /// region, not the bar strip).
    Region target_region(TargetClass cls, const std::string& canonical) const;

    std::string to_json() const;
    static StructureLayout from_json(const std::string& text);

    friend bool operator==(const StructureLayout&, const StructureLayout&) = default;

private:
    const std::vector<NamedRegion>& class_entries(TargetClass cls) const;

    std::optional<TableLayout> table_;
    std::optional<ChartLayout> chart_;
};

/// Region <-> {"x1":..,"y1":..,"x2":..,"y2":..} helpers shared by every
/// serialized form.
std::string region_to_json(const Region& r);

/// Disambiguate duplicate names by suffixing an ordinal: "Wins", "Wins#2"...
std::vector<std::string> disambiguate_names(const std::vector<std::string>& names);

} // namespace focal
