// Operator entry point. Subcommands wrap the library pipeline:
//   detect        image -> layout JSON on stdout
//   edit          apply one editing tool to an image
//   run           one edit-and-reason episode
//   bench         score a dataset, emit a run report
//   collect       build visual chain-of-thought training records
//   render-synth  deterministic table/chart fixtures with ground truth
//
// stdout carries machine-readable payload only; diagnostics go to stderr.
// Exit codes: 0 success, 1 partial (some items failed), 2 usage/fatal.
//
// Option precedence: config file (key=value lines, # comments) is overridden
// by flags, which are overridden by the FOCAL_* environment variables.
// Credentials are environment-only: FOCAL_API_KEY never appears in files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "focal/agent.hpp"
#include "focal/chat.hpp"
#include "focal/errors.hpp"
#include "focal/eval.hpp"
#include "focal/synth.hpp"
#include "focal/table_parse.hpp"
#include "focal/toolcall.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct GlobalConfig {
    std::string base_url;
    std::string api_key;
    std::string model = "gpt-4o";
    int max_turns = 5;
    int workers = 4;
    uint64_t seed = 0;
    std::string replay_path;
    std::string record_path;
};

// key = value lines; '#' starts a comment; unknown keys are fatal so typos
// do not silently change runs.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw focal::Error("cannot open config file " + path);
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw focal::Error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return values;
}

void apply_config_file(GlobalConfig& cfg, const std::string& path) {
    for (const auto& [key, value] : parse_config_file(path)) {
        if (key == "base_url") cfg.base_url = value;
        else if (key == "model") cfg.model = value;
        else if (key == "max_turns") cfg.max_turns = std::stoi(value);
        else if (key == "workers") cfg.workers = std::stoi(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "replay") cfg.replay_path = value;
        else if (key == "api_key") throw focal::Error("api_key is environment-only (FOCAL_API_KEY)");
        else throw focal::Error("unknown config key: " + key);
    }
}

void apply_env(GlobalConfig& cfg) {
    if (const char* v = std::getenv("FOCAL_BASE_URL")) cfg.base_url = v;
    if (const char* v = std::getenv("FOCAL_API_KEY")) cfg.api_key = v;
    if (const char* v = std::getenv("FOCAL_MODEL")) cfg.model = v;
    if (const char* v = std::getenv("FOCAL_MAX_TURNS")) cfg.max_turns = std::atoi(v);
    if (const char* v = std::getenv("FOCAL_WORKERS")) cfg.workers = std::atoi(v);
}

std::unique_ptr<focal::ChatClient> make_client(const GlobalConfig& cfg,
                                               std::unique_ptr<focal::ChatClient>& owned_inner) {
    std::unique_ptr<focal::ChatClient> client;
    if (!cfg.replay_path.empty()) {
        client = std::make_unique<focal::ReplayClient>(focal::ReplayStore::load(cfg.replay_path));
    } else {
        focal::HttpClientOptions options;
        options.base_url = cfg.base_url;
        options.api_key = cfg.api_key;
        client = std::make_unique<focal::HttpChatClient>(std::move(options));
    }
    if (!cfg.record_path.empty()) {
        owned_inner = std::move(client);
        return std::make_unique<focal::RecordingClient>(*owned_inner, cfg.record_path);
    }
    return client;
}

focal::AgentConfig agent_config(const GlobalConfig& cfg) {
    focal::AgentConfig agent;
    agent.max_turns = cfg.max_turns;
    agent.model = cfg.model;
    return agent;
}

focal::StructureLayout detect_layout(const focal::Raster& image,
                                     const std::vector<std::string>& columns, int rows,
                                     const std::string& chart_kind, int threshold) {
    if (!chart_kind.empty()) {
        if (chart_kind == "multi_subplot") {
            return focal::StructureLayout(focal::subplot_layout(image, 10));
        }
        // Bar kinds without dataset axis hints: report the chart area and
        // leave entries to the caller.
        focal::ChartLayout layout;
        layout.kind = focal::chart_kind_from_string(chart_kind);
        auto top = focal::detect_subplot_candidates(image, 1, threshold);
        if (top.empty()) throw focal::DetectionFailedError("no chart area found");
        layout.plot_region = top[0].bbox;
        return focal::StructureLayout(std::move(layout));
    }
    if (columns.empty() || rows < 1) {
        throw focal::Error("detect needs --columns and --rows, or --chart");
    }
    focal::TableParseOptions options;
    options.binarize_threshold = threshold;
    return focal::StructureLayout(focal::infer_table_layout(image, columns, rows, options));
}

// Question/answer pairs for synthetic fixtures, asking for one specific cell.
std::pair<std::string, std::string> table_question(const focal::TableSpec& spec,
                                                   focal::SeededRng& rng) {
    int row = int(rng.below(spec.cells.size()));
    int col = int(rng.below(spec.column_names.size()));
    std::string q = "what is the value of " + spec.column_names[col] + " in row " +
                    std::to_string(row + 1) + "?";
    return {q, spec.cells[row][col]};
}

int cmd_render_synth(int n, uint64_t seed, const std::string& out_dir, const std::string& kind) {
    fs::create_directories(out_dir);
    std::ofstream dataset(fs::path(out_dir) / "dataset.jsonl");
    focal::SeededRng seeder(seed);

    for (int i = 0; i < n; ++i) {
        uint64_t child = seeder.next();
        std::string id = "synth_" + std::to_string(i);
        ordered_json item;
        item["id"] = id;
        item["image"] = id + ".png";

        if (kind == "table" || kind == "table_borderless" ||
            (kind == "mixed" && i % 10 < 8)) {
            bool bordered = kind == "table_borderless" ? false
                            : kind == "table"          ? true
                                                       : i % 10 < 5;
            focal::TableSpec spec = focal::random_table_spec(child, bordered);
            auto [img, truth] = focal::render_table(spec);
            focal::SeededRng qrng(child + 1);
            auto [q, a] = table_question(spec, qrng);
            focal::save_png_file(img, (fs::path(out_dir) / (id + ".png")).string());
            std::ofstream(fs::path(out_dir) / (id + ".truth.json"))
                << truth.layout.to_json() << "\n";
            item["query"] = q;
            item["answer"] = a;
            item["source"] = "synth";
            item["columns"] = spec.column_names;
            item["row_count"] = int(spec.cells.size());
        } else {
            focal::ChartKind chart_kind =
                kind == "vbar"       ? focal::ChartKind::vertical_bar
                : kind == "hbar"     ? focal::ChartKind::horizontal_bar
                : kind == "subplots" ? focal::ChartKind::multi_subplot
                                     : (i % 2 ? focal::ChartKind::horizontal_bar
                                              : focal::ChartKind::vertical_bar);
            focal::ChartSpec spec = focal::random_chart_spec(child, chart_kind);
            auto [img, truth] = focal::render_chart(spec);
            focal::save_png_file(img, (fs::path(out_dir) / (id + ".png")).string());
            std::ofstream(fs::path(out_dir) / (id + ".truth.json"))
                << truth.layout.to_json() << "\n";
            item["source"] = chart_kind == focal::ChartKind::horizontal_bar ? "h_bar"
                             : chart_kind == focal::ChartKind::vertical_bar ? "v_bar"
                                                                            : "charxiv";
            if (chart_kind == focal::ChartKind::multi_subplot) {
                item["query"] = "which subplot has the tallest bar?";
                item["answer"] = "subplot_1";
                item["chart"] = {{"kind", "multi_subplot"}};
            } else {
                focal::SeededRng qrng(child + 1);
                size_t pick = qrng.below(spec.labels.size());
                item["query"] = "what is the value of " + spec.labels[pick] + "?";
                std::ostringstream value;
                value << spec.values[pick];
                item["answer"] = value.str();
                ordered_json chart;
                chart["kind"] = to_string(chart_kind);
                const focal::ChartLayout& layout = truth.layout.chart();
                chart["plot_region"] = {{"x1", layout.plot_region.x1},
                                        {"y1", layout.plot_region.y1},
                                        {"x2", layout.plot_region.x2},
                                        {"y2", layout.plot_region.y2}};
                ordered_json entries = ordered_json::object();
                for (const focal::NamedRegion& e : layout.axis_entries) {
                    entries[e.name] = {{"x1", e.region.x1},
                                       {"y1", e.region.y1},
                                       {"x2", e.region.x2},
                                       {"y2", e.region.y2}};
                }
                chart["entries"] = std::move(entries);
                item["chart"] = std::move(chart);
            }
        }
        dataset << item.dump() << "\n";
    }
    std::cout << (fs::path(out_dir) / "dataset.jsonl").string() << "\n";
    return 0;
}

std::vector<bool> score_episodes(const std::vector<focal::DatasetItem>& items,
                                 const std::vector<focal::Episode>& episodes) {
    std::vector<bool> scores;
    scores.reserve(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        bool correct = false;
        if (items[i].answer && episodes[i].status == focal::Episode::Status::answered) {
            correct = focal::score(episodes[i].final_answer, *items[i].answer,
                                   focal::default_score_config(items[i].source));
        }
        scores.push_back(correct);
    }
    return scores;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured-image focus editing and collection toolkit"};
    app.require_subcommand(1);

    GlobalConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file");

    // detect
    auto* detect = app.add_subcommand("detect", "recover the named-region layout of an image");
    std::string detect_image;
    std::vector<std::string> detect_columns;
    int detect_rows = 0;
    std::string detect_chart;
    int detect_threshold = 200;
    detect->add_option("image", detect_image, "input PNG")->required();
    detect->add_option("--columns", detect_columns, "column names, left to right")
        ->delimiter(',');
    detect->add_option("--rows", detect_rows, "number of data rows");
    detect->add_option("--chart", detect_chart,
                       "chart kind: horizontal_bar | vertical_bar | multi_subplot");
    detect->add_option("--threshold", detect_threshold, "ink luminance threshold (default 200)");

    // edit
    auto* edit = app.add_subcommand("edit", "apply one editing tool to an image");
    std::string edit_image, edit_layout, edit_tool, edit_out = "edited.png";
    std::vector<std::string> edit_targets;
    edit->add_option("image", edit_image, "input PNG")->required();
    edit->add_option("layout", edit_layout, "layout JSON file (see detect)")->required();
    edit->add_option("tool", edit_tool, "surface name, e.g. focus_on_columns_with_highlight")
        ->required();
    edit->add_option("targets", edit_targets, "target labels")->required();
    edit->add_option("-o,--out", edit_out, "output PNG path");

    // run
    auto* run_cmd = app.add_subcommand("run", "run one edit-and-reason episode");
    std::string run_image, run_question, run_chart, run_layout_path, run_out = "episodes";
    std::vector<std::string> run_columns;
    int run_rows = 0;
    run_cmd->add_option("--image", run_image, "input PNG")->required();
    run_cmd->add_option("--question", run_question, "the question to answer")->required();
    run_cmd->add_option("--columns", run_columns, "table column names")->delimiter(',');
    run_cmd->add_option("--rows", run_rows, "table data rows");
    run_cmd->add_option("--chart", run_chart, "chart kind");
    run_cmd->add_option("--layout", run_layout_path, "layout JSON file (skips detection)");
    run_cmd->add_option("--out", run_out, "episode output directory");
    run_cmd->add_option("--replay", cfg.replay_path, "replay store (offline backend)");
    run_cmd->add_option("--record", cfg.record_path, "append responses to this store");
    run_cmd->add_option("--model", cfg.model, "model name");
    run_cmd->add_option("--max-turns", cfg.max_turns, "turn limit");

    // bench
    auto* bench = app.add_subcommand("bench", "run and score a dataset");
    std::string bench_dataset, bench_source = "synth", bench_out;
    bench->add_option("--dataset", bench_dataset, "JSONL dataset")->required();
    bench->add_option("--source", bench_source, "default source tag");
    bench->add_option("--out", bench_out, "also write the report JSON here");
    bench->add_option("--replay", cfg.replay_path, "replay store (offline backend)");
    bench->add_option("--record", cfg.record_path, "append responses to this store");
    bench->add_option("--model", cfg.model, "model name");
    bench->add_option("--max-turns", cfg.max_turns, "turn limit");
    bench->add_option("--workers", cfg.workers, "concurrent episodes");

    // collect
    auto* collect = app.add_subcommand("collect", "collect visual chain-of-thought records");
    std::string collect_dataset, collect_source = "synth", collect_out = "vcot";
    collect->add_option("--dataset", collect_dataset, "JSONL dataset with gold answers")
        ->required();
    collect->add_option("--source", collect_source, "default source tag");
    collect->add_option("--out", collect_out, "output directory (records.jsonl + images)");
    collect->add_option("--replay", cfg.replay_path, "replay store (offline backend)");
    collect->add_option("--record", cfg.record_path, "append responses to this store");
    collect->add_option("--model", cfg.model, "model name");
    collect->add_option("--max-turns", cfg.max_turns, "turn limit");
    collect->add_option("--workers", cfg.workers, "concurrent items");

    // render-synth
    auto* render = app.add_subcommand("render-synth", "render fixture images with ground truth");
    int render_n = 10;
    std::string render_out = "synth", render_kind = "mixed";
    render->add_option("--n", render_n, "number of fixtures");
    render->add_option("--seed", cfg.seed, "corpus seed");
    render->add_option("--out", render_out, "output directory");
    render->add_option("--kind", render_kind,
                       "table | table_borderless | vbar | hbar | subplots | mixed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        // Flags already sit in cfg; environment wins last.
        apply_env(cfg);

        if (detect->parsed()) {
            focal::Raster image = focal::load_png_file(detect_image);
            focal::StructureLayout layout =
                detect_layout(image, detect_columns, detect_rows, detect_chart, detect_threshold);
            std::cout << layout.to_json() << "\n";
            return 0;
        }

        if (edit->parsed()) {
            focal::Raster image = focal::load_png_file(edit_image);
            std::ifstream in(edit_layout);
            if (!in) throw focal::Error("cannot open layout " + edit_layout);
            std::stringstream buffer;
            buffer << in.rdbuf();
            focal::StructureLayout layout = focal::StructureLayout::from_json(buffer.str());
            auto tool = focal::tool_from_surface(edit_tool);
            if (!tool) {
                std::ostringstream known;
                for (const auto& info : focal::tool_registry()) {
                    known << " " << info.surface_name;
                }
                throw focal::Error("unknown tool " + edit_tool + "; available:" + known.str());
            }
            auto [edited, record] = focal::apply_tool(image, layout, *tool, edit_targets);
            focal::save_png_file(edited, edit_out);
            std::cout << edit_out << "\n";
            return 0;
        }

        if (run_cmd->parsed()) {
            focal::Task task;
            task.id = fs::path(run_image).stem().string();
            task.image = std::make_shared<focal::Raster>(focal::load_png_file(run_image));
            task.question = run_question;
            task.source = "synth";
            if (!run_layout_path.empty()) {
                std::ifstream in(run_layout_path);
                if (!in) throw focal::Error("cannot open layout " + run_layout_path);
                std::stringstream buffer;
                buffer << in.rdbuf();
                task.layout = focal::StructureLayout::from_json(buffer.str());
            } else {
                task.layout =
                    detect_layout(*task.image, run_columns, run_rows, run_chart, 200);
            }

            std::unique_ptr<focal::ChatClient> owned_inner;
            auto client = make_client(cfg, owned_inner);
            focal::Episode episode = focal::run(task, *client, agent_config(cfg));
            focal::save_episode(episode, run_out);
            if (episode.status == focal::Episode::Status::answered) {
                std::cout << "FINAL ANSWER: " << episode.final_answer << "\n";
                return 0;
            }
            std::cerr << "episode failed: " << episode.fail_reason << "\n";
            return 1;
        }

        if (bench->parsed()) {
            auto items = focal::load_dataset(bench_dataset,
                                             focal::source_tag_from_string(bench_source));
            std::vector<focal::Task> tasks;
            tasks.reserve(items.size());
            for (const auto& item : items) tasks.push_back(focal::task_from_item(item));

            std::unique_ptr<focal::ChatClient> owned_inner;
            auto client = make_client(cfg, owned_inner);
            auto episodes = focal::run_batch(tasks, *client, agent_config(cfg), cfg.workers);
            auto scores = score_episodes(items, episodes);
            focal::RunReport report = focal::make_report(episodes, scores);
            std::string json = focal::report_to_json(report);
            std::cout << json << "\n";
            std::cerr << focal::report_to_text(report);
            if (!bench_out.empty()) {
                std::ofstream out(bench_out);
                out << json << "\n";
            }
            for (const auto& episode : episodes) {
                if (episode.status == focal::Episode::Status::failed) return 1;
            }
            return 0;
        }

        if (collect->parsed()) {
            auto items = focal::load_dataset(collect_dataset,
                                             focal::source_tag_from_string(collect_source));
            std::unique_ptr<focal::ChatClient> owned_inner;
            auto client = make_client(cfg, owned_inner);
            focal::CollectConfig collect_config;
            collect_config.agent = agent_config(cfg);
            collect_config.workers = cfg.workers;
            focal::CollectResult result = focal::collect_vcot(items, *client, collect_config);

            fs::create_directories(collect_out);
            fs::path records_path = fs::path(collect_out) / "records.jsonl";
            std::ofstream records(records_path);
            for (const auto& record : result.records) records << vcot_to_json(record) << "\n";
            fs::path images_dir = fs::path(collect_out) / "images";
            for (const auto& episode : result.kept_episodes) {
                focal::save_episode(episode, images_dir.string());
            }

            ordered_json summary;
            summary["records"] = result.records.size();
            summary["first_try_correct"] = result.first_try_correct;
            summary["hinted_correct"] = result.hinted_correct;
            summary["discarded"] = result.discarded;
            summary["skipped"] = result.skipped;
            summary["records_path"] = records_path.string();
            std::cout << summary.dump(2) << "\n";
            return result.skipped > 0 ? 1 : 0;
        }

        if (render->parsed()) {
            return cmd_render_synth(render_n, cfg.seed, render_out, render_kind);
        }
    } catch (const focal::DetectionFailedError& e) {
        std::cerr << "DetectionFailed: " << e.what() << "\n";
        return 2;
    } catch (const focal::UnknownTargetError& e) {
        std::cerr << "UnknownTarget: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
