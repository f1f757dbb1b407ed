#include "focal/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "focal/errors.hpp"
#include "focal/table_parse.hpp"

namespace focal {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kFocusAreasLeadIn =
    " The areas to focus on in the image have bounding box coordinates: ";
constexpr const char* kFocusAreasLeadOut = ". Looking at these areas, ";

} // namespace

std::string to_string(SourceTag tag) {
    switch (tag) {
    case SourceTag::vwtq: return "vwtq";
    case SourceTag::vwtq_syn: return "vwtq_syn";
    case SourceTag::vtabfact: return "vtabfact";
    case SourceTag::charxiv: return "charxiv";
    case SourceTag::h_bar: return "h_bar";
    case SourceTag::v_bar: return "v_bar";
    case SourceTag::synth: return "synth";
    }
    return "?";
}

SourceTag source_tag_from_string(const std::string& s) {
    for (SourceTag tag : {SourceTag::vwtq, SourceTag::vwtq_syn, SourceTag::vtabfact,
                          SourceTag::charxiv, SourceTag::h_bar, SourceTag::v_bar,
                          SourceTag::synth}) {
        if (to_string(tag) == s) return tag;
    }
    throw Error("unknown source tag: " + s);
}

std::vector<DatasetItem> load_dataset(const std::string& path, SourceTag default_tag) {
    std::ifstream in(path);
    if (!in) throw StorageError("cannot open dataset " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::vector<DatasetItem> items;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw SchemaError(line_no, "not a JSON object");
        }
        try {
            DatasetItem item;
            if (!j.contains("id") || !j.contains("image") || !j.contains("query")) {
                throw Error("missing one of id/image/query");
            }
            item.id = j.at("id").get<std::string>();
            item.query = j.at("query").get<std::string>();
            item.image_path = (base / j.at("image").get<std::string>()).string();
            if (!std::filesystem::exists(item.image_path)) {
                throw Error("image not found: " + item.image_path);
            }
            if (j.contains("answer")) item.answer = j.at("answer").get<std::string>();
            item.source = j.contains("source")
                              ? source_tag_from_string(j.at("source").get<std::string>())
                              : default_tag;
            if (j.contains("columns")) {
                item.columns = j.at("columns").get<std::vector<std::string>>();
            }
            if (j.contains("row_count")) item.row_count = j.at("row_count").get<int>();
            if (j.contains("chart")) {
                const auto& c = j.at("chart");
                ChartHints hints;
                hints.kind = chart_kind_from_string(c.at("kind").get<std::string>());
                if (c.contains("plot_region")) {
                    const auto& p = c.at("plot_region");
                    hints.plot_region = Region{p.at("x1").get<int>(), p.at("y1").get<int>(),
                                               p.at("x2").get<int>(), p.at("y2").get<int>()};
                }
                if (c.contains("entries")) {
                    for (auto it = c.at("entries").begin(); it != c.at("entries").end(); ++it) {
                        const auto& p = it.value();
                        hints.axis_entries.push_back(
                            {it.key(), Region{p.at("x1").get<int>(), p.at("y1").get<int>(),
                                              p.at("x2").get<int>(), p.at("y2").get<int>()}});
                    }
                }
                item.chart = std::move(hints);
            }
            items.push_back(std::move(item));
        } catch (const std::exception& e) {
            throw SchemaError(line_no, e.what());
        }
    }
    return items;
}

Task task_from_item(const DatasetItem& item) {
    Task task;
    task.id = item.id;
    task.question = item.query;
    task.gold_answer = item.answer;
    task.source = to_string(item.source);
    task.image = std::make_shared<Raster>(load_png_file(item.image_path));

    if (item.chart) {
        ChartLayout layout;
        layout.kind = item.chart->kind;
        layout.axis_entries = item.chart->axis_entries;
        if (item.chart->plot_region) {
            layout.plot_region = *item.chart->plot_region;
        } else {
            // Chart area from the longest contour; falls back to the full
            // image when the figure has no frame.
            auto candidates = detect_subplot_candidates(*task.image, 1);
            layout.plot_region = candidates.empty()
                                     ? Region{0, 0, task.image->width() - 1,
                                              task.image->height() - 1}
                                     : candidates[0].bbox;
        }
        if (layout.kind == ChartKind::multi_subplot && layout.subplots.empty()) {
            layout = subplot_layout(*task.image, 10);
        }
        task.layout = StructureLayout(std::move(layout));
    } else if (!item.columns.empty()) {
        int rows = item.row_count.value_or(0);
        if (rows < 1) throw Error("table item " + item.id + " needs row_count");
        task.layout =
            StructureLayout(infer_table_layout(*task.image, item.columns, rows));
    } else if (item.source == SourceTag::charxiv) {
        task.layout = StructureLayout(subplot_layout(*task.image, 10));
    } else {
        throw Error("item " + item.id + " carries no structure hints");
    }
    return task;
}

ScoreConfig default_score_config(SourceTag tag) {
    switch (tag) {
    case SourceTag::charxiv:
    case SourceTag::h_bar:
    case SourceTag::v_bar:
        return {ScoreMode::numeric_relaxed, 0.05};
    default:
        return {ScoreMode::exact_normalized, 0.05};
    }
}

std::string normalize_answer(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '%' || c == '$') continue;
        // Thousands separator: a comma squeezed between digits.
        if (c == ',' && i > 0 && i + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            continue;
        }
        out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    }
    // Trim and collapse whitespace runs.
    std::string squeezed;
    bool pending = false;
    for (char c : out) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !squeezed.empty();
            continue;
        }
        if (pending) squeezed.push_back(' ');
        pending = false;
        squeezed.push_back(c);
    }
    return squeezed;
}

namespace {

std::optional<double> parse_number(const std::string& normalized) {
    if (normalized.empty()) return std::nullopt;
    const char* begin = normalized.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end != begin + normalized.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

} // namespace

bool score(const std::string& prediction, const std::string& gold, const ScoreConfig& config,
           ChatClient* judge, const std::string& judge_model) {
    const std::string p = normalize_answer(prediction);
    const std::string g = normalize_answer(gold);

    switch (config.mode) {
    case ScoreMode::exact_normalized:
        return p == g;
    case ScoreMode::numeric_relaxed: {
        auto pn = parse_number(p);
        auto gn = parse_number(g);
        if (pn && gn) {
            if (*gn == 0.0) return *pn == 0.0;
            return std::abs(*pn - *gn) <= config.tolerance * std::abs(*gn);
        }
        return p == g;
    }
    case ScoreMode::external_judge: {
        if (!judge) throw JudgeUnavailableError();
        ChatRequest request;
        request.model = judge_model;
        request.messages.push_back(ChatMessage::text(
            Role::system,
            "You grade question answering. Given a prediction and the gold answer, reply "
            "with exactly CORRECT if they mean the same thing, otherwise INCORRECT."));
        request.messages.push_back(ChatMessage::text(
            Role::user, "Prediction: " + prediction + "\nGold answer: " + gold));
        std::string verdict = judge->complete(request);
        return verdict.find("CORRECT") != std::string::npos &&
               verdict.find("INCORRECT") == std::string::npos;
    }
    }
    return false;
}

std::string build_vcot_input(const std::string& response0, std::span<const Region> focus_areas,
                             const std::string& response1) {
    ordered_json areas = ordered_json::array();
    for (const Region& r : focus_areas) {
        areas.push_back({{"x1", r.x1}, {"y1", r.y1}, {"x2", r.x2}, {"y2", r.y2}});
    }
    return response0 + kFocusAreasLeadIn + areas.dump() + kFocusAreasLeadOut + response1;
}

std::vector<Region> parse_vcot_focus_areas(const std::string& vcot_input) {
    size_t lead = vcot_input.find(kFocusAreasLeadIn);
    if (lead == std::string::npos) throw Error("vcot_input has no focus-areas section");
    size_t start = lead + std::string(kFocusAreasLeadIn).size();
    size_t end = vcot_input.find(kFocusAreasLeadOut, start);
    if (end == std::string::npos) throw Error("vcot_input focus-areas section is unterminated");
    ordered_json areas = ordered_json::parse(vcot_input.substr(start, end - start));
    std::vector<Region> out;
    for (const auto& a : areas) {
        out.push_back(Region{a.at("x1").get<int>(), a.at("y1").get<int>(),
                             a.at("x2").get<int>(), a.at("y2").get<int>()});
    }
    return out;
}

std::string vcot_to_json(const VCoTRecord& record) {
    ordered_json j;
    j["id"] = record.id;
    j["query"] = record.query;
    j["answer"] = record.answer;
    j["source"] = record.source;
    j["images"] = record.images;
    j["response0"] = record.response0;
    j["edited_images"] = record.edited_images;
    j["response1"] = record.response1;
    ordered_json areas = ordered_json::array();
    for (const Region& r : record.focus_areas) {
        areas.push_back({{"x1", r.x1}, {"y1", r.y1}, {"x2", r.x2}, {"y2", r.y2}});
    }
    j["focus_areas"] = std::move(areas);
    j["vcot_input"] = record.vcot_input;
    return j.dump();
}

VCoTRecord vcot_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    VCoTRecord record;
    record.id = j.at("id").get<std::string>();
    record.query = j.at("query").get<std::string>();
    record.answer = j.at("answer").get<std::string>();
    record.source = j.at("source").get<std::string>();
    record.images = j.at("images").get<std::vector<std::string>>();
    record.response0 = j.at("response0").get<std::string>();
    record.edited_images = j.at("edited_images").get<std::vector<std::string>>();
    record.response1 = j.at("response1").get<std::string>();
    for (const auto& a : j.at("focus_areas")) {
        record.focus_areas.push_back(Region{a.at("x1").get<int>(), a.at("y1").get<int>(),
                                            a.at("x2").get<int>(), a.at("y2").get<int>()});
    }
    record.vcot_input = j.at("vcot_input").get<std::string>();
    return record;
}

namespace {

void validate_record(const VCoTRecord& record) {
    if (record.focus_areas.empty() != record.edited_images.empty()) {
        throw Error("record " + record.id + ": focus_areas and edited_images must be empty "
                    "together");
    }
    if (parse_vcot_focus_areas(record.vcot_input) != record.focus_areas) {
        throw Error("record " + record.id + ": vcot_input does not round-trip focus_areas");
    }
}

VCoTRecord record_from_episode(const Task& task, const Episode& episode) {
    VCoTRecord record;
    record.id = task.id;
    record.query = task.question;
    record.answer = task.gold_answer.value_or("");
    record.source = task.source;
    record.images = {episode.initial_digest + ".png"};

    // The focus thought is the last editing turn; its focus areas are that
    // turn's affected regions. Unedited episodes use the first turn.
    const Turn* focus_turn = nullptr;
    for (const Turn& turn : episode.turns) {
        if (!turn.edit_records.empty()) focus_turn = &turn;
        if (!turn.observation_digest.empty()) {
            record.edited_images.push_back(turn.observation_digest + ".png");
        }
    }
    if (focus_turn) {
        record.response0 = focus_turn->assistant_text;
        for (const EditRecord& edit : focus_turn->edit_records) {
            record.focus_areas.insert(record.focus_areas.end(), edit.affected_regions.begin(),
                                      edit.affected_regions.end());
        }
    } else {
        record.response0 = episode.turns.empty() ? "" : episode.turns.front().assistant_text;
    }
    record.response1 = episode.raw_answer_text;
    record.vcot_input = build_vcot_input(record.response0, record.focus_areas, record.response1);
    validate_record(record);
    return record;
}

} // namespace

CollectResult collect_from_tasks(const std::vector<Task>& tasks, ChatClient& client,
                                 const CollectConfig& config) {
    struct Slot {
        std::optional<VCoTRecord> record;
        std::optional<Episode> episode;
        enum class Outcome { first_try, hinted, discarded, skipped } outcome;
    };
    for (const Task& task : tasks) {
        if (!task.gold_answer) {
            throw Error("collect requires gold answers (task " + task.id + ")");
        }
    }

    std::vector<Slot> slots(tasks.size());
    std::atomic<size_t> next{0};

    auto srun = [&](size_t i) {
        const Task& task = tasks[i];
        ScoreConfig score_config = config.score.value_or(
            default_score_config(source_tag_from_string(task.source)));

        auto is_correct = [&](const Episode& episode) {
            return episode.status == Episode::Status::answered &&
                   score(episode.final_answer, *task.gold_answer, score_config);
        };

        Episode first = run(task, client, config.agent);
        if (first.status == Episode::Status::failed && first.fail_reason == "transport") {
            slots[i].outcome = Slot::Outcome::skipped;
            return;
        }
        if (is_correct(first)) {
            slots[i].record = record_from_episode(task, first);
            slots[i].episode = std::move(first);
            slots[i].outcome = Slot::Outcome::first_try;
            return;
        }

        Task hinted = task;
        std::string hint = config.hint_template;
        size_t pos = hint.find("{gold}");
        if (pos != std::string::npos) hint.replace(pos, 6, *task.gold_answer);
        hinted.question = task.question + " " + hint;

        Episode second = run(hinted, client, config.agent);
        if (second.status == Episode::Status::failed && second.fail_reason == "transport") {
            slots[i].outcome = Slot::Outcome::skipped;
            return;
        }
        if (is_correct(second)) {
            // The record keeps the original query; the hint is harness detail.
            slots[i].record = record_from_episode(task, second);
            slots[i].episode = std::move(second);
            slots[i].outcome = Slot::Outcome::hinted;
            return;
        }
        slots[i].outcome = Slot::Outcome::discarded;
    };

    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                srun(i);
            } catch (const std::exception&) {
                // Endpoint or replay-store trouble: the item is skipped, the
                // batch keeps going.
                slots[i].outcome = Slot::Outcome::skipped;
                slots[i].record.reset();
                slots[i].episode.reset();
            }
        }
    };
    int workers = std::max(1, config.workers);
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    CollectResult result;
    for (Slot& slot : slots) {
        switch (slot.outcome) {
        case Slot::Outcome::first_try: result.first_try_correct += 1; break;
        case Slot::Outcome::hinted: result.hinted_correct += 1; break;
        case Slot::Outcome::discarded: result.discarded += 1; break;
        case Slot::Outcome::skipped: result.skipped += 1; break;
        }
        if (slot.record) {
            result.records.push_back(std::move(*slot.record));
            result.kept_episodes.push_back(std::move(*slot.episode));
        }
    }
    return result;
}

CollectResult collect_vcot(const std::vector<DatasetItem>& items, ChatClient& client,
                           const CollectConfig& config) {
    std::vector<Task> tasks;
    tasks.reserve(items.size());
    for (const DatasetItem& item : items) tasks.push_back(task_from_item(item));
    return collect_from_tasks(tasks, client, config);
}

RunReport make_report(std::span<const Episode> episodes, const std::vector<bool>& scores) {
    if (episodes.size() != scores.size()) throw Error("episodes/scores size mismatch");
    RunReport report;
    struct Acc {
        int items = 0, correct = 0, edited = 0;
        long long turns = 0;
        std::map<std::string, int> failures;
    };
    std::map<std::string, Acc> accs;
    int total_correct = 0;
    for (size_t i = 0; i < episodes.size(); ++i) {
        Acc& acc = accs[episodes[i].source];
        acc.items += 1;
        acc.turns += long(episodes[i].turns.size());
        if (episodes[i].edited) acc.edited += 1;
        if (scores[i]) {
            acc.correct += 1;
            total_correct += 1;
        }
        if (episodes[i].status == Episode::Status::failed) {
            acc.failures[episodes[i].fail_reason] += 1;
        }
    }
    for (const auto& [source, acc] : accs) {
        SourceReport sr;
        sr.items = acc.items;
        sr.correct = acc.correct;
        sr.accuracy = acc.items ? double(acc.correct) / acc.items : 0.0;
        sr.edit_rate = acc.items ? double(acc.edited) / acc.items : 0.0;
        sr.mean_turns = acc.items ? double(acc.turns) / acc.items : 0.0;
        sr.failures = acc.failures;
        report.per_source[source] = std::move(sr);
    }
    report.total_items = int(episodes.size());
    report.overall_accuracy =
        episodes.empty() ? 0.0 : double(total_correct) / double(episodes.size());
    return report;
}

std::string report_to_json(const RunReport& report) {
    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["total_items"] = report.total_items;
    j["overall_accuracy"] = report.overall_accuracy;
    ordered_json sources = ordered_json::object();
    for (const auto& [source, sr] : report.per_source) {
        sources[source] = {{"items", sr.items},         {"correct", sr.correct},
                           {"accuracy", sr.accuracy},   {"edit_rate", sr.edit_rate},
                           {"mean_turns", sr.mean_turns}, {"failures", sr.failures}};
    }
    j["per_source"] = std::move(sources);
    return j.dump(2);
}

std::string report_to_text(const RunReport& report) {
    std::ostringstream out;
    out << "source      items  correct  accuracy  edit_rate  mean_turns\n";
    char line[160];
    for (const auto& [source, sr] : report.per_source) {
        std::snprintf(line, sizeof(line), "%-10s %6d %8d %9.3f %10.3f %11.2f\n", source.c_str(),
                      sr.items, sr.correct, sr.accuracy, sr.edit_rate, sr.mean_turns);
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-10s %6d %8s %9.3f\n", "overall", report.total_items, "",
                  report.overall_accuracy);
    out << line;
    return out.str();
}

} // namespace focal
