#include "focal/edit_tools.hpp"

#include <algorithm>
#include <set>

#include "focal/errors.hpp"
#include "focal/table_parse.hpp"

namespace focal {

namespace {

constexpr Color kHighlight{255, 0, 0, 50};
constexpr Color kDrawRed{255, 0, 0, 255};
constexpr int kDrawThickness = 3;

struct ClassNames {
    const char* plural;       // "columns"
    const char* arg;          // "columns_to_focus_on"
    const char* noun;         // prompt phrasing, e.g. "columns"
};

ClassNames class_names(TargetClass cls) {
    switch (cls) {
    case TargetClass::columns: return {"columns", "columns_to_focus_on", "columns"};
    case TargetClass::rows: return {"rows", "rows_to_focus_on", "rows"};
    case TargetClass::bars_x: return {"bars_x", "bars_to_focus_on", "bars at the named x-axis values"};
    case TargetClass::bars_y: return {"bars_y", "bars_to_focus_on", "bars at the named y-axis values"};
    case TargetClass::subplots: return {"subplots", "subplots_to_focus_on", "subplots"};
    }
    return {"?", "?", "?"};
}

std::vector<ToolInfo> build_registry() {
    std::vector<ToolInfo> reg;
    struct Method {
        ToolMethod method;
        const char* suffix;
    };
    const Method methods[] = {{ToolMethod::highlight, "highlight"},
                              {ToolMethod::mask_keep, "mask"},
                              {ToolMethod::draw, "draw"}};
    const TargetClass classes[] = {TargetClass::columns, TargetClass::rows, TargetClass::bars_x,
                                   TargetClass::bars_y, TargetClass::subplots};
    for (TargetClass cls : classes) {
        ClassNames names = class_names(cls);
        for (const Method& m : methods) {
            ToolInfo info;
            info.surface_name = std::string("focus_on_") + names.plural + "_with_" + m.suffix;
            info.target_class = cls;
            switch (m.method) {
            case ToolMethod::highlight:
                info.doc = std::string("Overlays a light red color on the ") + names.noun +
                           " that need to be focused on.";
                break;
            case ToolMethod::mask_keep:
                info.doc = std::string("Places a white mask over the ") + names.noun +
                           " that are NOT passed as arguments; the named ones stay visible.";
                break;
            case ToolMethod::draw:
                info.doc = std::string("Overlays a solid red bounding box on the ") + names.noun +
                           " that need to be focused on.";
                break;
            }
            int class_index = int(cls);
            int method_index = m.method == ToolMethod::highlight ? 0
                               : m.method == ToolMethod::mask_keep ? 1
                                                                   : 2;
            info.tool = ToolId(class_index * 3 + method_index);
            reg.push_back(std::move(info));
        }
    }
    return reg;
}

} // namespace

ToolMethod tool_method(ToolId tool) {
    switch (int(tool) % 3) {
    case 0: return ToolMethod::highlight;
    case 1: return ToolMethod::mask_keep;
    default: return ToolMethod::draw;
    }
}

TargetClass tool_target_class(ToolId tool) {
    return TargetClass(int(tool) / 3);
}

const std::vector<ToolInfo>& tool_registry() {
    static const std::vector<ToolInfo> registry = build_registry();
    return registry;
}

std::optional<ToolId> tool_from_surface(const std::string& surface_name) {
    for (const ToolInfo& info : tool_registry()) {
        if (info.surface_name == surface_name) return info.tool;
    }
    return std::nullopt;
}

const ToolInfo& tool_info(ToolId tool) {
    for (const ToolInfo& info : tool_registry()) {
        if (info.tool == tool) return info;
    }
    throw Error("tool id not in registry");
}

std::string tool_signature(ToolId tool) {
    const ToolInfo& info = tool_info(tool);
    ClassNames names = class_names(info.target_class);
    return info.surface_name + "(image, " + names.arg + ", all_" + names.plural +
           "_bounding_boxes)";
}

namespace {

// Region a target paints for highlight/draw, and the unit of keep/complement
// for masks. Bar classes expand the axis entry to its full plot strip.
std::vector<Region> paint_regions(const StructureLayout& layout, TargetClass cls,
                                  const std::vector<std::string>& canonical) {
    if (cls == TargetClass::bars_x || cls == TargetClass::bars_y) {
        return bar_regions_from_axis(layout.chart(), canonical);
    }
    std::vector<Region> out;
    out.reserve(canonical.size());
    for (const std::string& name : canonical) {
        out.push_back(layout.target_region(cls, name));
    }
    return out;
}

// Mask rectangles for the non-kept entries of the class.
std::vector<Region> mask_complement(const StructureLayout& layout, TargetClass cls,
                                    const std::set<std::string>& kept) {
    std::vector<std::string> others;
    for (const std::string& name : layout.available_targets(cls)) {
        if (!kept.count(name)) others.push_back(name);
    }
    std::vector<Region> rects = paint_regions(layout, cls, others);

    if (layout.is_chart() && layout.chart().kind != ChartKind::multi_subplot) {
        // Bar masks also white out the entry's own axis label, so non-kept
        // categories disappear entirely. The strip widens only along the
        // plot-to-label direction; sideways it keeps its midpoint bounds.
        const bool vertical = layout.chart().kind == ChartKind::vertical_bar;
        const auto& entries = layout.chart().axis_entries;
        size_t j = 0;
        for (size_t i = 0; i < entries.size(); ++i) {
            if (kept.count(entries[i].name)) continue;
            const Region& label = entries[i].region;
            if (vertical) {
                rects[j].y1 = std::min(rects[j].y1, label.y1);
                rects[j].y2 = std::max(rects[j].y2, label.y2);
            } else {
                rects[j].x1 = std::min(rects[j].x1, label.x1);
                rects[j].x2 = std::max(rects[j].x2, label.x2);
            }
            ++j;
        }
    }
    return rects;
}

} // namespace

std::pair<Raster, EditRecord> apply_tool(const Raster& r, const StructureLayout& layout,
                                         ToolId tool, std::span<const std::string> targets) {
    if (targets.empty()) throw EmptyTargetsError();

    const TargetClass cls = tool_target_class(tool);
    std::vector<std::string> canonical;
    canonical.reserve(targets.size());
    for (const std::string& t : targets) {
        canonical.push_back(layout.resolve_target(cls, t));
    }

    EditRecord record;
    record.tool = tool;
    record.targets = canonical;
    record.input_hash = pixel_digest(r);
    record.affected_regions = paint_regions(layout, cls, canonical);

    Raster out = r;
    switch (tool_method(tool)) {
    case ToolMethod::highlight:
        out = composite_overlay_union(r, record.affected_regions, kHighlight);
        break;
    case ToolMethod::mask_keep: {
        std::set<std::string> kept(canonical.begin(), canonical.end());

        // Kept strips, kept axis labels and the table header are protected:
        // neighbors share boundary pixels, and a kept region must come
        // through byte-identical.
        std::vector<Region> protected_rects = record.affected_regions;
        if (layout.is_table() && layout.table().header_region) {
            protected_rects.push_back(*layout.table().header_region);
        }
        if (layout.is_chart() && layout.chart().kind != ChartKind::multi_subplot) {
            for (const NamedRegion& e : layout.chart().axis_entries) {
                if (kept.count(e.name)) protected_rects.push_back(e.region);
            }
        }

        std::vector<uint8_t> cover(size_t(r.width()) * r.height(), 0);
        auto stamp = [&](const Region& rect, uint8_t value) {
            if (auto c = rect.clamped(r.width(), r.height())) {
                for (int y = c->y1; y <= c->y2; ++y) {
                    std::fill_n(cover.begin() + size_t(y) * r.width() + c->x1, c->width(), value);
                }
            }
        };
        for (const Region& rect : mask_complement(layout, cls, kept)) stamp(rect, 1);
        for (const Region& rect : protected_rects) stamp(rect, 0);

        uint8_t* px = out.bytes().data();
        for (size_t i = 0; i < cover.size(); ++i) {
            if (cover[i]) {
                px[i * 4] = 255;
                px[i * 4 + 1] = 255;
                px[i * 4 + 2] = 255;
                px[i * 4 + 3] = 255;
            }
        }
        break;
    }
    case ToolMethod::draw:
        for (const Region& rect : record.affected_regions) {
            out = draw_rect_outline(out, rect, kDrawRed, kDrawThickness);
        }
        break;
    }
    record.output_hash = pixel_digest(out);
    return {std::move(out), std::move(record)};
}

} // namespace focal
