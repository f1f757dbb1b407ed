#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "focal/agent.hpp"
#include "focal/chat.hpp"
#include "focal/layout.hpp"

namespace focal {

enum class SourceTag { vwtq, vwtq_syn, vtabfact, charxiv, h_bar, v_bar, synth };

std::string to_string(SourceTag tag);
SourceTag source_tag_from_string(const std::string& s);

/// Axis-coordinate annotations shipped with chart datasets.
struct ChartHints {
    ChartKind kind = ChartKind::vertical_bar;
    std::optional<Region> plot_region;
    std::vector<NamedRegion> axis_entries;
};

/// One dataset line. JSONL schema, one object per line:
///   id        string, required
///   image     string, required; path relative to the dataset file
///   query     string, required
///   answer    string, optional (required by bench/collect)
///   source    string, optional; defaults to the tag passed to load_dataset
///   columns   [string], tables: header names left to right
///   row_count int, tables: number of data rows
///   chart     {"kind": "horizontal_bar"|"vertical_bar"|"multi_subplot",
///              "plot_region": {x1,y1,x2,y2},            (optional)
///              "entries": {label: {x1,y1,x2,y2}, ...}}  (bar kinds)
struct DatasetItem {
    std::string id;
    std::string image_path; // resolved against the dataset directory
    std::string query;
    std::optional<std::string> answer;
    SourceTag source = SourceTag::synth;
    std::vector<std::string> columns;
    std::optional<int> row_count;
    std::optional<ChartHints> chart;
};

/// Parses and validates a JSONL dataset. Image paths must resolve to files.
/// Throws SchemaError carrying the offending line number.
std::vector<DatasetItem> load_dataset(const std::string& path, SourceTag default_tag);

/// Builds the runnable task: loads the image and recovers the layout from the
/// item's hints (table grid inference, provided axis coordinates, or top-k
/// subplot candidates for charxiv-style items).
Task task_from_item(const DatasetItem& item);

enum class ScoreMode { exact_normalized, numeric_relaxed, external_judge };

struct ScoreConfig {
    ScoreMode mode = ScoreMode::exact_normalized;
    double tolerance = 0.05; // numeric_relaxed only; fraction of |gold|
};

/// Chart sources score numeric_relaxed(0.05); table sources exact_normalized.
ScoreConfig default_score_config(SourceTag tag);

/// exact_normalized lowercases, trims, collapses whitespace and strips
/// thousands separators, "%" and "$". numeric_relaxed accepts
/// |p - g| <= tolerance * |g| when both parse as numbers (gold 0 demands
/// prediction 0) and falls back to exact_normalized otherwise.
/// external_judge asks the given client; without one it throws
/// JudgeUnavailableError.
bool score(const std::string& prediction, const std::string& gold, const ScoreConfig& config,
           ChatClient* judge = nullptr, const std::string& judge_model = "gpt-4o");

std::string normalize_answer(const std::string& text);

/// One collected training example mirroring the published record field
/// names: response0 is the focus thought, response1 the answer thought, and
/// vcot_input the concatenated supervision target.
struct VCoTRecord {
    std::string id;
    std::string query;
    std::string answer;
    std::string source;
    std::vector<std::string> images;
    std::string response0;
    std::vector<std::string> edited_images;
    std::string response1;
    std::vector<Region> focus_areas;
    std::string vcot_input;
};

std::string vcot_to_json(const VCoTRecord& record);
VCoTRecord vcot_from_json(const std::string& text);

std::string build_vcot_input(const std::string& response0, std::span<const Region> focus_areas,
                             const std::string& response1);

/// Recovers the focus_areas embedded in a vcot_input string (round-trip of
/// build_vcot_input).
std::vector<Region> parse_vcot_focus_areas(const std::string& vcot_input);

struct CollectConfig {
    AgentConfig agent;
    std::optional<ScoreConfig> score; // per-source default when unset
    int workers = 4;
    /// {gold} is replaced by the gold answer and the result appended to the
    /// question on the retry pass.
    std::string hint_template = "The correct answer is {gold}. Explain and refocus accordingly.";
};

struct CollectResult {
    std::vector<VCoTRecord> records;
    /// Episode behind each record (aligned), for persisting images.
    std::vector<Episode> kept_episodes;
    int first_try_correct = 0;
    int hinted_correct = 0;
    int discarded = 0;
    int skipped = 0; // transport failures
};

/// The collection filter: keep episodes whose prediction scores correct;
/// otherwise retry once with the gold answer hinted into the question; keep
/// the hinted episode if it is correct; otherwise drop the item. Tasks must
/// carry gold answers.
CollectResult collect_from_tasks(const std::vector<Task>& tasks, ChatClient& client,
                                 const CollectConfig& config = {});

/// load -> task_from_item -> collect_from_tasks.
CollectResult collect_vcot(const std::vector<DatasetItem>& items, ChatClient& client,
                           const CollectConfig& config = {});

struct SourceReport {
    int items = 0;
    int correct = 0;
    double accuracy = 0.0;
    double edit_rate = 0.0;
    double mean_turns = 0.0;
    std::map<std::string, int> failures; // fail_reason -> count
};

struct RunReport {
    int schema_version = 1;
    std::map<std::string, SourceReport> per_source;
    int total_items = 0;
    double overall_accuracy = 0.0;
};

/// episodes[i] scored correct iff scores[i]; the two sequences are aligned.
RunReport make_report(std::span<const Episode> episodes, const std::vector<bool>& scores);

std::string report_to_json(const RunReport& report);
std::string report_to_text(const RunReport& report);

} // namespace focal
