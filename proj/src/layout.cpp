#include "focal/layout.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

#include "focal/errors.hpp"

namespace focal {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string lowercased(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return out;
}

std::string whitespace_normalized(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(char(std::tolower(c)));
    }
    return out;
}

ordered_json region_json(const Region& r) {
    return ordered_json{{"x1", r.x1}, {"y1", r.y1}, {"x2", r.x2}, {"y2", r.y2}};
}

Region region_from(const ordered_json& j) {
    if (!j.is_object() || !j.contains("x1") || !j.contains("y1") || !j.contains("x2") ||
        !j.contains("y2")) {
        throw Error("region JSON must carry x1/y1/x2/y2");
    }
    return Region{j.at("x1").get<int>(), j.at("y1").get<int>(), j.at("x2").get<int>(),
                  j.at("y2").get<int>()};
}

ordered_json named_regions_json(const std::vector<NamedRegion>& entries) {
    ordered_json out = ordered_json::object();
    for (const NamedRegion& e : entries) out[e.name] = region_json(e.region);
    return out;
}

std::vector<NamedRegion> named_regions_from(const ordered_json& j) {
    std::vector<NamedRegion> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.push_back({it.key(), region_from(it.value())});
    }
    return out;
}

} // namespace

std::string to_string(TargetClass cls) {
    switch (cls) {
    case TargetClass::columns: return "columns";
    case TargetClass::rows: return "rows";
    case TargetClass::bars_x: return "bars_x";
    case TargetClass::bars_y: return "bars_y";
    case TargetClass::subplots: return "subplots";
    }
    return "?";
}

std::string to_string(ChartKind kind) {
    switch (kind) {
    case ChartKind::horizontal_bar: return "horizontal_bar";
    case ChartKind::vertical_bar: return "vertical_bar";
    case ChartKind::multi_subplot: return "multi_subplot";
    }
    return "?";
}

ChartKind chart_kind_from_string(const std::string& s) {
    if (s == "horizontal_bar") return ChartKind::horizontal_bar;
    if (s == "vertical_bar") return ChartKind::vertical_bar;
    if (s == "multi_subplot") return ChartKind::multi_subplot;
    throw Error("unknown chart kind: " + s);
}

const TableLayout& StructureLayout::table() const {
    if (!table_) throw Error("layout is not a table");
    return *table_;
}

const ChartLayout& StructureLayout::chart() const {
    if (!chart_) throw Error("layout is not a chart");
    return *chart_;
}

bool StructureLayout::supports(TargetClass cls) const {
    switch (cls) {
    case TargetClass::columns:
    case TargetClass::rows:
        return is_table();
    case TargetClass::bars_x:
        return is_chart() && chart_->kind == ChartKind::vertical_bar;
    case TargetClass::bars_y:
        return is_chart() && chart_->kind == ChartKind::horizontal_bar;
    case TargetClass::subplots:
        return is_chart() && chart_->kind == ChartKind::multi_subplot;
    }
    return false;
}

const std::vector<NamedRegion>& StructureLayout::class_entries(TargetClass cls) const {
    if (!supports(cls)) {
        std::string have = is_table() ? "table" : is_chart() ? to_string(chart_->kind) : "empty";
        throw TargetClassMismatchError("targets of class " + to_string(cls) +
                                       " do not apply to a " + have + " layout");
    }
    switch (cls) {
    case TargetClass::columns: return table_->columns;
    case TargetClass::rows: return table_->rows;
    case TargetClass::bars_x:
    case TargetClass::bars_y: return chart_->axis_entries;
    case TargetClass::subplots: return chart_->subplots;
    }
    throw Error("unreachable");
}

std::vector<std::string> StructureLayout::available_targets(TargetClass cls) const {
    std::vector<std::string> names;
    for (const NamedRegion& e : class_entries(cls)) names.push_back(e.name);
    return names;
}

std::string StructureLayout::resolve_target(TargetClass cls, const std::string& label) const {
    const auto& entries = class_entries(cls);
    for (const NamedRegion& e : entries) {
        if (e.name == label) return e.name;
    }
    const std::string lower = lowercased(label);
    for (const NamedRegion& e : entries) {
        if (lowercased(e.name) == lower) return e.name;
    }
    const std::string squeezed = whitespace_normalized(label);
    for (const NamedRegion& e : entries) {
        if (whitespace_normalized(e.name) == squeezed) return e.name;
    }
    throw UnknownTargetError(label, available_targets(cls));
}

Region StructureLayout::target_region(TargetClass cls, const std::string& canonical) const {
    for (const NamedRegion& e : class_entries(cls)) {
        if (e.name == canonical) return e.region;
    }
    throw UnknownTargetError(canonical, available_targets(cls));
}

std::string StructureLayout::to_json() const {
    ordered_json j;
    if (is_table()) {
        j["kind"] = "table";
        j["table_region"] = region_json(table_->table_region);
        if (table_->header_region) j["header"] = region_json(*table_->header_region);
        j["columns"] = named_regions_json(table_->columns);
        j["rows"] = named_regions_json(table_->rows);
    } else if (is_chart()) {
        j["kind"] = to_string(chart_->kind);
        j["plot_region"] = region_json(chart_->plot_region);
        if (chart_->kind == ChartKind::multi_subplot) {
            j["subplots"] = named_regions_json(chart_->subplots);
        } else {
            j["entries"] = named_regions_json(chart_->axis_entries);
        }
    } else {
        throw Error("cannot serialize an empty layout");
    }
    return j.dump();
}

StructureLayout StructureLayout::from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("kind")) {
        throw Error("malformed layout JSON");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "table") {
        TableLayout t;
        t.table_region = region_from(j.at("table_region"));
        if (j.contains("header")) t.header_region = region_from(j.at("header"));
        if (j.contains("columns")) t.columns = named_regions_from(j.at("columns"));
        if (j.contains("rows")) t.rows = named_regions_from(j.at("rows"));
        return StructureLayout(std::move(t));
    }
    ChartLayout c;
    c.kind = chart_kind_from_string(kind);
    c.plot_region = region_from(j.at("plot_region"));
    if (j.contains("entries")) c.axis_entries = named_regions_from(j.at("entries"));
    if (j.contains("subplots")) c.subplots = named_regions_from(j.at("subplots"));
    return StructureLayout(std::move(c));
}

std::string region_to_json(const Region& r) {
    return region_json(r).dump();
}

std::vector<std::string> disambiguate_names(const std::vector<std::string>& names) {
    std::set<std::string> used;
    std::vector<std::string> out;
    out.reserve(names.size());
    for (const std::string& name : names) {
        std::string candidate = name;
        for (int n = 2; used.count(candidate); ++n) {
            candidate = name + "#" + std::to_string(n);
        }
        used.insert(candidate);
        out.push_back(candidate);
    }
    return out;
}

} // namespace focal
