#include "focal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "focal/errors.hpp"
#include "glyphs.hpp"

namespace focal {

uint64_t SeededRng::next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

bool SeededRng::chance(double p) {
    return double(next() >> 11) / double(1ull << 53) < p;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw SpecError(what);
}

void validate(const TableSpec& spec) {
    require(!spec.column_names.empty(), "table needs at least one column");
    require(!spec.cells.empty(), "table needs at least one row");
    for (const auto& name : spec.column_names) require(!name.empty(), "empty column name");
    for (const auto& row : spec.cells) {
        require(row.size() == spec.column_names.size(), "ragged cell row");
    }
    require(spec.style.font_scale >= 1 && spec.style.font_scale <= 3, "font_scale out of range");
    require(spec.style.cell_padding >= 2 && spec.style.cell_padding <= 16,
            "cell_padding out of range");
    require(spec.style.border_margin >= 0 && spec.style.border_margin <= 32,
            "border_margin out of range");
    require(!spec.style.border || spec.style.cell_padding >= 2, "bordered padding too small");
    require(spec.style.border || spec.style.cell_padding >= 4,
            "borderless tables need >= 4 px padding for detectable gaps");
}

void draw_hline(Raster& r, int x1, int x2, int y, Color c) {
    for (int x = x1; x <= x2; ++x)
        if (r.in_bounds(x, y)) r.set(x, y, c);
}

void draw_vline(Raster& r, int x, int y1, int y2, Color c) {
    for (int y = y1; y <= y2; ++y)
        if (r.in_bounds(x, y)) r.set(x, y, c);
}

void draw_frame(Raster& r, const Region& box, Color c) {
    draw_hline(r, box.x1, box.x2, box.y1, c);
    draw_hline(r, box.x1, box.x2, box.y2, c);
    draw_vline(r, box.x1, box.y1, box.y2, c);
    draw_vline(r, box.x2, box.y1, box.y2, c);
}

void fill_rect(Raster& r, const Region& box, Color c) {
    for (int y = box.y1; y <= box.y2; ++y)
        for (int x = box.x1; x <= box.x2; ++x)
            if (r.in_bounds(x, y)) r.set(x, y, c);
}

} // namespace

std::pair<Raster, GroundTruth> render_table(const TableSpec& spec) {
    validate(spec);
    const TableStyle& st = spec.style;
    const int cols = int(spec.column_names.size());
    const int rows = int(spec.cells.size());
    const int scale = st.font_scale;
    const int glyph_h = glyphs::text_height(scale);

    // Column widths from the widest text (header or cell), plus padding.
    std::vector<int> col_width(cols, 0);
    for (int j = 0; j < cols; ++j) {
        int w = glyphs::text_width(spec.column_names[j], scale);
        for (int i = 0; i < rows; ++i) {
            w = std::max(w, glyphs::text_width(spec.cells[i][j], scale));
        }
        col_width[j] = w + 2 * st.cell_padding;
    }
    const int row_height = glyph_h + 2 * st.cell_padding;

    // Grid boundary coordinates. Bordered tables draw a rule on every
    // boundary pixel; borderless tables use the same geometry without ink.
    const int m = st.border_margin;
    std::vector<int> xs(cols + 1), ys(rows + 2);
    xs[0] = m;
    for (int j = 0; j < cols; ++j) xs[j + 1] = xs[j] + col_width[j] + 1;
    ys[0] = m;
    for (int i = 0; i <= rows; ++i) ys[i + 1] = ys[i] + row_height + 1;

    Raster img(xs[cols] + m + 1, ys[rows + 1] + m + 1, st.background);

    // Row stripes (data rows only).
    if (st.row_stripe) {
        for (int i = 0; i < rows; i += 2) {
            fill_rect(img, {xs[0] + 1, ys[i + 1] + 1, xs[cols] - 1, ys[i + 2] - 1},
                      st.stripe_color);
        }
    }

    GroundTruth truth;
    truth.borderless = !st.border;
    truth.cell_text_regions.assign(rows, std::vector<Region>(cols));

    // Text, centered per cell.
    auto put_text = [&](const std::string& text, int cx1, int cx2, int cy1, int cy2) {
        int tw = glyphs::text_width(text, scale);
        int tx = cx1 + std::max(0, (cx2 - cx1 + 1 - tw) / 2);
        int ty = cy1 + std::max(0, (cy2 - cy1 + 1 - glyph_h) / 2);
        glyphs::draw_text(img, tx, ty, text, st.ink, scale);
        return glyphs::text_bounds(tx, ty, text, scale);
    };
    for (int j = 0; j < cols; ++j) {
        truth.header_text_regions.push_back(
            put_text(spec.column_names[j], xs[j] + 1, xs[j + 1] - 1, ys[0] + 1, ys[1] - 1));
        for (int i = 0; i < rows; ++i) {
            truth.cell_text_regions[i][j] =
                put_text(spec.cells[i][j], xs[j] + 1, xs[j + 1] - 1, ys[i + 1] + 1, ys[i + 2] - 1);
        }
    }

    if (st.border) {
        for (int y : ys) draw_hline(img, xs[0], xs[cols], y, st.rule_color);
        for (int x : xs) draw_vline(img, x, ys[0], ys[rows + 1], st.rule_color);
    }

    TableLayout layout;
    layout.table_region = {xs[0], ys[0], xs[cols], ys[rows + 1]};
    layout.header_region = Region{xs[0], ys[0], xs[cols], ys[1]};
    std::vector<std::string> names = disambiguate_names(spec.column_names);
    for (int j = 0; j < cols; ++j) {
        layout.columns.push_back({names[j], {xs[j], ys[0], xs[j + 1], ys[rows + 1]}});
    }
    for (int i = 0; i < rows; ++i) {
        layout.rows.push_back(
            {"row_" + std::to_string(i + 1), {xs[0], ys[i + 1], xs[cols], ys[i + 2]}});
    }
    truth.layout = StructureLayout(std::move(layout));
    return {std::move(img), std::move(truth)};
}

namespace {

std::pair<Raster, GroundTruth> render_bars(const ChartSpec& spec) {
    require(!spec.labels.empty(), "bar chart needs labels");
    require(spec.labels.size() == spec.values.size(), "labels/values size mismatch");
    double vmax = 0;
    for (double v : spec.values) {
        require(std::isfinite(v) && v >= 0, "bar values must be finite and nonnegative");
        vmax = std::max(vmax, v);
    }
    require(vmax > 0, "at least one bar value must be positive");

    const int scale = spec.font_scale;
    const int glyph_h = glyphs::text_height(scale);
    const int n = int(spec.labels.size());
    const bool vertical = spec.kind == ChartKind::vertical_bar;
    const Color bar_color{42, 78, 156, 255};
    const Color frame_color{40, 40, 40, 255};

    GroundTruth truth;
    ChartLayout layout;
    layout.kind = spec.kind;

    if (vertical) {
        int label_w = 0;
        for (const auto& s : spec.labels) label_w = std::max(label_w, glyphs::text_width(s, scale));
        const int slot = std::max(label_w + 6, 34);
        const int plot_w = slot * n + 1;
        const int plot_h = 120 + 20 * scale;
        const Region plot{10, 8, 10 + plot_w, 8 + plot_h};
        Raster img(plot.x2 + 12, plot.y2 + glyph_h + 10, kWhite);
        draw_frame(img, plot, frame_color);

        const int usable = plot.height() - 2;
        for (int i = 0; i < n; ++i) {
            int cx = plot.x1 + 1 + slot * i + slot / 2;
            int bw = std::max(4, (slot * 3) / 5);
            int h = int(std::lround(spec.values[i] / vmax * usable));
            if (h > 0) {
                Region bar{cx - bw / 2, plot.y2 - h, cx + bw / 2 - 1, plot.y2 - 1};
                fill_rect(img, bar, bar_color);
                truth.bar_rects.push_back(bar);
            } else {
                truth.bar_rects.push_back({cx, plot.y2 - 1, cx, plot.y2 - 1});
            }
            int tw = glyphs::text_width(spec.labels[i], scale);
            int tx = cx - tw / 2;
            int ty = plot.y2 + 3;
            glyphs::draw_text(img, tx, ty, spec.labels[i], kBlack, scale);
            layout.axis_entries.push_back(
                {spec.labels[i], glyphs::text_bounds(tx, ty, spec.labels[i], scale)});
        }
        layout.plot_region = plot;
        truth.layout = StructureLayout(std::move(layout));
        return {std::move(img), std::move(truth)};
    }

    // Horizontal bars: labels on the left, bars grow rightward.
    int label_w = 0;
    for (const auto& s : spec.labels) label_w = std::max(label_w, glyphs::text_width(s, scale));
    const int slot = std::max(glyph_h + 8, 22);
    const int plot_h = slot * n + 1;
    const int plot_w = 150 + 30 * scale;
    const Region plot{label_w + 14, 8, label_w + 14 + plot_w, 8 + plot_h};
    Raster img(plot.x2 + 12, plot.y2 + 12, kWhite);
    draw_frame(img, plot, frame_color);

    const int usable = plot.width() - 2;
    for (int i = 0; i < n; ++i) {
        int cy = plot.y1 + 1 + slot * i + slot / 2;
        int bh = std::max(4, (slot * 3) / 5);
        int w = int(std::lround(spec.values[i] / vmax * usable));
        if (w > 0) {
            Region bar{plot.x1 + 1, cy - bh / 2, plot.x1 + w, cy + bh / 2 - 1};
            fill_rect(img, bar, bar_color);
            truth.bar_rects.push_back(bar);
        } else {
            truth.bar_rects.push_back({plot.x1 + 1, cy, plot.x1 + 1, cy});
        }
        int tw = glyphs::text_width(spec.labels[i], scale);
        int tx = plot.x1 - 6 - tw;
        int ty = cy - glyph_h / 2;
        glyphs::draw_text(img, tx, ty, spec.labels[i], kBlack, scale);
        layout.axis_entries.push_back(
            {spec.labels[i], glyphs::text_bounds(tx, ty, spec.labels[i], scale)});
    }
    layout.plot_region = plot;
    truth.layout = StructureLayout(std::move(layout));
    return {std::move(img), std::move(truth)};
}

std::pair<Raster, GroundTruth> render_subplots(const ChartSpec& spec) {
    require(spec.subplot_rows >= 1 && spec.subplot_cols >= 1, "subplot grid must be >= 1x1");
    require(spec.subplot_rows * spec.subplot_cols <= 16, "too many subplots");

    const int sub_w = 110, sub_h = 80, gap = 14, margin = 10;
    const Color frame_color{40, 40, 40, 255};
    const Color bar_color{42, 78, 156, 255};

    const int cols = spec.subplot_cols, rows = spec.subplot_rows;
    Raster img(margin * 2 + cols * sub_w + (cols - 1) * gap,
               margin * 2 + rows * sub_h + (rows - 1) * gap, kWhite);

    GroundTruth truth;
    ChartLayout layout;
    layout.kind = ChartKind::multi_subplot;
    layout.plot_region = {0, 0, img.width() - 1, img.height() - 1};

    SeededRng rng(spec.seed);
    int index = 1;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            Region frame{margin + c * (sub_w + gap), margin + r * (sub_h + gap), 0, 0};
            frame.x2 = frame.x1 + sub_w - 1;
            frame.y2 = frame.y1 + sub_h - 1;
            draw_frame(img, frame, frame_color);
            // A few bars inside so subplots carry some content ink.
            int bars = 3 + int(rng.below(3));
            for (int b = 0; b < bars; ++b) {
                int bw = (sub_w - 10) / bars;
                int h = 8 + int(rng.below(uint64_t(sub_h - 20)));
                Region bar{frame.x1 + 5 + b * bw + 2, frame.y2 - 2 - h,
                           frame.x1 + 5 + (b + 1) * bw - 2, frame.y2 - 2};
                fill_rect(img, bar, bar_color);
            }
            layout.subplots.push_back({"subplot_" + std::to_string(index++), frame});
        }
    }
    truth.layout = StructureLayout(std::move(layout));
    return {std::move(img), std::move(truth)};
}

} // namespace

std::pair<Raster, GroundTruth> render_chart(const ChartSpec& spec) {
    require(spec.font_scale >= 1 && spec.font_scale <= 3, "font_scale out of range");
    if (spec.kind == ChartKind::multi_subplot) return render_subplots(spec);
    return render_bars(spec);
}

namespace {

const char* kWords[] = {"Alpha", "Bravo", "Delta", "Echo",  "Foxtrot", "Gamma", "Haze",
                        "Indigo", "Jade",  "Koala", "Lumen", "Metro",   "Nova",  "Orion",
                        "Pluto",  "Quest", "Rider", "Sigma", "Tango",   "Umbra", "Vesta"};
const char* kColumnWords[] = {"Team", "Country", "Wins",  "Points", "Rank", "Year",
                              "Name", "City",    "Score", "Total",  "Games", "Gold"};
const char* kCountries[] = {"UK",     "US",    "France", "China", "Brazil",
                            "Italy",  "Spain", "India",  "Japan", "Kenya"};

std::string random_cell(SeededRng& rng, int kind) {
    switch (kind) {
    case 0: return std::to_string(rng.range(0, 9999));
    case 1: return kWords[rng.below(std::size(kWords))];
    default: {
        std::string s = kWords[rng.below(std::size(kWords))];
        return s + " " + std::to_string(rng.range(0, 99));
    }
    }
}

} // namespace

TableSpec random_table_spec(uint64_t seed, bool bordered) {
    SeededRng rng(seed);
    TableSpec spec;
    spec.seed = seed;

    int cols = rng.range(2, 5);
    int rows = rng.range(2, 8);
    std::vector<std::string> pool(std::begin(kColumnWords), std::end(kColumnWords));
    for (int j = 0; j < cols; ++j) {
        spec.column_names.push_back(pool[rng.below(pool.size())]);
    }
    spec.column_names = disambiguate_names(spec.column_names);

    std::vector<int> col_kind(cols);
    for (int j = 0; j < cols; ++j) col_kind[j] = int(rng.below(3));
    for (int i = 0; i < rows; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < cols; ++j) row.push_back(random_cell(rng, col_kind[j]));
        spec.cells.push_back(std::move(row));
    }

    TableStyle st;
    st.border = bordered;
    st.border_margin = rng.range(4, 16);
    st.cell_padding = rng.range(4, 9);
    st.font_scale = rng.chance(0.3) ? 2 : 1;
    st.row_stripe = rng.chance(0.4);
    const Color backgrounds[] = {kWhite,
                                 {248, 248, 248, 255},
                                 {255, 255, 240, 255},
                                 {240, 244, 248, 255},
                                 {246, 240, 250, 255}};
    st.background = backgrounds[rng.below(std::size(backgrounds))];
    st.stripe_color = {230, 234, 240, 255};
    spec.style = st;
    return spec;
}

ChartSpec random_chart_spec(uint64_t seed, ChartKind kind) {
    SeededRng rng(seed);
    ChartSpec spec;
    spec.seed = seed;
    spec.kind = kind;
    spec.font_scale = 1;
    if (kind == ChartKind::multi_subplot) {
        spec.subplot_rows = rng.range(1, 3);
        spec.subplot_cols = rng.range(2, 3);
        return spec;
    }
    int n = rng.range(3, 8);
    std::vector<std::string> pool(std::begin(kCountries), std::end(kCountries));
    for (int i = 0; i < n; ++i) {
        spec.labels.push_back(pool[i % pool.size()]);
        spec.values.push_back(double(rng.range(1, 100)));
    }
    return spec;
}

std::vector<CorpusEntry> make_corpus(int n, uint64_t seed) {
    if (n < 1) throw SpecError("corpus size must be >= 1");
    std::vector<CorpusEntry> out;
    out.reserve(n);
    SeededRng seeder(seed);
    for (int i = 0; i < n; ++i) {
        uint64_t child = seeder.next();
        int slot = i % 10;
        if (slot < 5) {
            TableSpec spec = random_table_spec(child, true);
            auto [raster, truth] = render_table(spec);
            out.push_back({std::move(raster), std::move(truth), std::move(spec)});
        } else if (slot < 8) {
            TableSpec spec = random_table_spec(child, false);
            auto [raster, truth] = render_table(spec);
            out.push_back({std::move(raster), std::move(truth), std::move(spec)});
        } else if (slot == 8) {
            ChartSpec spec = random_chart_spec(
                child, (i / 10) % 2 ? ChartKind::horizontal_bar : ChartKind::vertical_bar);
            auto [raster, truth] = render_chart(spec);
            out.push_back({std::move(raster), std::move(truth), std::move(spec)});
        } else {
            ChartSpec spec = random_chart_spec(child, ChartKind::multi_subplot);
            auto [raster, truth] = render_chart(spec);
            out.push_back({std::move(raster), std::move(truth), std::move(spec)});
        }
    }
    return out;
}

} // namespace focal
