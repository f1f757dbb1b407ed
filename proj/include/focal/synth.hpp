#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "focal/layout.hpp"
#include "focal/raster.hpp"

namespace focal {

/// Deterministic generator (splitmix64); the renderer never touches global
/// random state.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : state_(seed) {}

    uint64_t next();
    uint64_t below(uint64_t n) { return next() % n; }
    int range(int lo, int hi) { return lo + int(below(uint64_t(hi - lo + 1))); }
    bool chance(double p);

private:
    uint64_t state_;
};

// Style ranges are frozen for the acceptance corpora:
//   background: luminance >= 225 (light grounds only)
//   border: on (full grid incl. outer frame) or off (no rules at all)
//   border_margin: 4..16 px, cell_padding: 4..9 px
//   font_scale: 1 or 2, row_stripe: on/off with luminance >= 228
struct TableStyle {
    Color background = kWhite;
    bool border = true;
    int border_margin = 8;
    int cell_padding = 4;
    int font_scale = 1;
    bool row_stripe = false;
    Color stripe_color{235, 235, 240, 255};
    Color ink = kBlack;
    Color rule_color{60, 60, 60, 255};
};

struct TableSpec {
    uint64_t seed = 0;
    std::vector<std::string> column_names;
    std::vector<std::vector<std::string>> cells; // row-major, one entry per column
    TableStyle style;
};

struct ChartSpec {
    uint64_t seed = 0;
    ChartKind kind = ChartKind::vertical_bar;
    std::vector<std::string> labels; // per bar; ignored for multi_subplot
    std::vector<double> values;      // nonnegative, finite
    int subplot_rows = 2;
    int subplot_cols = 2;
    int font_scale = 1;
};

/// The exact layout the renderer drew, plus per-cell text boxes. This is the
/// oracle the structure parser is scored against.
struct GroundTruth {
    StructureLayout layout;
    bool borderless = false;
    std::vector<Region> header_text_regions;            // tables: one per column
    std::vector<std::vector<Region>> cell_text_regions; // tables: rows x columns
    std::vector<Region> bar_rects;                      // bar charts: drawn bars
};

/// Renders a table image. Same spec, same bytes. Throws SpecError on an
/// invalid spec (no columns, ragged rows, out-of-range style values).
std::pair<Raster, GroundTruth> render_table(const TableSpec& spec);

/// Renders a bar chart or a multi-subplot figure with exact geometry records.
std::pair<Raster, GroundTruth> render_chart(const ChartSpec& spec);

/// Style-randomized spec generators within the documented ranges.
TableSpec random_table_spec(uint64_t seed, bool bordered);
ChartSpec random_chart_spec(uint64_t seed, ChartKind kind);

struct CorpusEntry {
    Raster raster;
    GroundTruth truth;
    std::variant<TableSpec, ChartSpec> spec;
};

/// n seed-deterministic entries cycling through bordered tables, borderless
/// tables, bar charts and multi-subplot figures.
std::vector<CorpusEntry> make_corpus(int n, uint64_t seed);

} // namespace focal
