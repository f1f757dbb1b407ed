#include "focal/agent.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "focal/errors.hpp"

namespace focal {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kAnswerProtocol =
    "Reply with ANSWER: <your answer>\n\n"
    "Please extract the final answer in FINAL ANSWER: <final answer> and ends with TERMINATE.";

// Tools offered for the task's layout class, in registry order.
std::vector<const ToolInfo*> tools_for_layout(const StructureLayout& layout) {
    std::vector<const ToolInfo*> out;
    for (const ToolInfo& info : tool_registry()) {
        if (layout.supports(info.target_class)) out.push_back(&info);
    }
    return out;
}

std::string system_text(const StructureLayout& layout) {
    std::string text =
        "You are a helpful multimodal AI assistant.\n"
        "You can edit the image you were given by calling one of the editing functions "
        "below from a Python code block. The harness executes the call and sends you the "
        "edited image; the arguments named image and bounding_boxes are supplied for you.\n\n"
        "Editing functions:\n";
    for (const ToolInfo* info : tools_for_layout(layout)) {
        text += "- " + tool_signature(info->tool) + ": " + info->doc + "\n";
    }
    text +=
        "\nFor each turn, first write a THOUGHT based on the images and text you see, then "
        "either call exactly one editing function or answer.\n"
        "If you think you have the answer to the initial user request, reply with "
        "\"ANSWER: <your answer>\" and end with \"TERMINATE\".\n";
    return text;
}

std::string observation_question(const std::string& question) {
    return "Answer the question " + question +
           ". You can turn the table image into text and answer with step of thinking.\n\n" +
           kAnswerProtocol;
}

ordered_json region_json(const Region& r) {
    return ordered_json{{"x1", r.x1}, {"y1", r.y1}, {"x2", r.x2}, {"y2", r.y2}};
}

} // namespace

std::vector<ChatMessage> build_initial_prompt(const Task& task) {
    std::vector<ChatMessage> messages;
    messages.push_back(ChatMessage::text(Role::system, system_text(task.layout)));

    ChatMessage user;
    user.role = Role::user;
    user.parts.push_back(Part::from_image(task.image));
    std::string text = "The regions of the image are given as JSON bounding boxes:\n" +
                       task.layout.to_json() + "\n\n" + observation_question(task.question);
    user.parts.push_back(Part::from_text(std::move(text)));
    messages.push_back(std::move(user));
    return messages;
}

std::shared_ptr<const Raster> Episode::image_by_digest(const std::string& digest) const {
    for (const auto& [d, raster] : images) {
        if (d == digest) return raster;
    }
    return nullptr;
}

EpisodeRun::EpisodeRun(Task task, AgentConfig config)
    : task_(std::move(task)), config_(std::move(config)) {
    episode_.task_id = task_.id;
    episode_.source = task_.source;
    current_ = task_.image;
    episode_.initial_digest = pixel_digest(*current_);
    episode_.images.push_back({episode_.initial_digest, current_});
    messages_ = build_initial_prompt(task_);
}

bool EpisodeRun::finished() const {
    return episode_.status != Episode::Status::running;
}

ChatRequest EpisodeRun::next_request() const {
    ChatRequest request;
    request.messages = messages_;
    request.temperature = config_.temperature;
    request.max_output_tokens = config_.max_output_tokens;
    request.model = config_.model;
    return request;
}

void EpisodeRun::append_observation(const std::string& text,
                                    std::shared_ptr<const Raster> image) {
    Turn& turn = episode_.turns.back();
    turn.observation_text = text;

    ChatMessage observation;
    observation.role = Role::user;
    if (image) {
        turn.observation_digest = pixel_digest(*image);
        episode_.images.push_back({turn.observation_digest, image});
        observation.parts.push_back(Part::from_image(std::move(image)));
    }
    observation.parts.push_back(Part::from_text(text));
    messages_.push_back(std::move(observation));
}

void EpisodeRun::step(const std::string& assistant_text) {
    if (finished()) throw Error("step() on a finished episode");

    messages_.push_back(ChatMessage::text(Role::assistant, assistant_text));
    episode_.turns.push_back({});
    Turn& turn = episode_.turns.back();
    turn.assistant_text = assistant_text;

    if (has_answer_marker(assistant_text)) {
        episode_.status = Episode::Status::answered;
        episode_.final_answer = extract_final_answer(assistant_text).value_or("");
        episode_.raw_answer_text = assistant_text;
        return;
    }

    // A failing turn gets one diagnostic observation back (the repair
    // round-trip). If the repair fails as well, the turn degrades to a no-op
    // re-ask so diagnostics cannot ping-pong until the turn limit.
    auto fail_observation = [&](const std::string& detail) {
        if (last_turn_failed_) {
            append_observation("No usable editing call. Either call one editing function or "
                               "answer the question.\n\n" +
                                   observation_question(task_.question),
                               nullptr);
        } else {
            append_observation(detail + "\n" + observation_question(task_.question), nullptr);
        }
        last_turn_failed_ = true;
    };

    ParseReport report = extract_calls(assistant_text);
    if (report.has_errors()) {
        fail_observation("Execution failed.\n" + report.diagnostics_text());
    } else if (report.calls.empty()) {
        last_turn_failed_ = false;
        append_observation("No editing call found. Either call one editing function or "
                           "answer the question.\n\n" +
                               observation_question(task_.question),
                           nullptr);
    } else {
        try {
            std::vector<ToolCall> calls = validate_calls(report, task_.layout);
            // Edits compose: each call applies to the result of the previous
            // one, and later turns start from this turn's output.
            std::shared_ptr<const Raster> working = current_;
            std::vector<EditRecord> records;
            for (const ToolCall& call : calls) {
                auto [edited, record] = apply_tool(*working, task_.layout, call.tool,
                                                   std::span<const std::string>(call.targets));
                working = std::make_shared<Raster>(std::move(edited));
                records.push_back(std::move(record));
            }
            turn.calls = std::move(calls);
            turn.edit_records = std::move(records);
            episode_.edited = true;
            current_ = working;
            last_turn_failed_ = false;
            append_observation("Execution success. The output is as follows.\n\n" +
                                   observation_question(task_.question),
                               current_);
        } catch (const Error& e) {
            fail_observation(std::string("Execution failed.\nerror: ") + e.what() + "\n");
        }
    }

    if (int(episode_.turns.size()) >= config_.max_turns) {
        episode_.status = Episode::Status::failed;
        episode_.fail_reason = "max_turns";
    }
}

Episode run(const Task& task, ChatClient& client, const AgentConfig& config) {
    EpisodeRun loop(task, config);
    try {
        while (!loop.finished()) {
            std::string reply = client.complete(loop.next_request());
            loop.step(reply);
        }
    } catch (const TransportError&) {
        Episode episode = loop.take_episode();
        episode.status = Episode::Status::failed;
        episode.fail_reason = "transport";
        return episode;
    }
    return loop.take_episode();
}

std::vector<Episode> run_batch(const std::vector<Task>& tasks, ChatClient& client,
                               const AgentConfig& config, int workers) {
    if (workers < 1) workers = 1;
    std::vector<Episode> episodes(tasks.size());
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                episodes[i] = run(tasks[i], client, config);
            } catch (const std::exception& e) {
                episodes[i].task_id = tasks[i].id;
                episodes[i].source = tasks[i].source;
                episodes[i].status = Episode::Status::failed;
                episodes[i].fail_reason = std::string("internal: ") + e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return episodes;
}

std::map<std::string, double> edit_rate(std::span<const Episode> episodes) {
    std::map<std::string, std::pair<int, int>> counts; // source -> (edited, total)
    for (const Episode& e : episodes) {
        auto& [edited, total] = counts[e.source];
        total += 1;
        if (e.edited) edited += 1;
    }
    std::map<std::string, double> rates;
    for (const auto& [source, pair] : counts) {
        rates[source] = double(pair.first) / double(pair.second);
    }
    return rates;
}

std::string episode_to_json(const Episode& episode) {
    ordered_json j;
    j["task_id"] = episode.task_id;
    j["source"] = episode.source;
    switch (episode.status) {
    case Episode::Status::running: j["status"] = "running"; break;
    case Episode::Status::answered: j["status"] = "answered"; break;
    case Episode::Status::failed: j["status"] = "failed"; break;
    }
    if (episode.status == Episode::Status::answered) {
        j["final_answer"] = episode.final_answer;
        j["raw_answer_text"] = episode.raw_answer_text;
    }
    if (episode.status == Episode::Status::failed) j["fail_reason"] = episode.fail_reason;
    j["edited"] = episode.edited;
    j["initial_image"] = episode.initial_digest + ".png";

    ordered_json turns = ordered_json::array();
    for (const Turn& turn : episode.turns) {
        ordered_json t;
        t["assistant_text"] = turn.assistant_text;
        ordered_json calls = ordered_json::array();
        for (const ToolCall& call : turn.calls) {
            calls.push_back({{"tool", tool_info(call.tool).surface_name},
                             {"targets", call.targets}});
        }
        t["calls"] = std::move(calls);
        ordered_json edits = ordered_json::array();
        for (const EditRecord& record : turn.edit_records) {
            ordered_json regions = ordered_json::array();
            for (const Region& r : record.affected_regions) regions.push_back(region_json(r));
            edits.push_back({{"tool", tool_info(record.tool).surface_name},
                             {"targets", record.targets},
                             {"affected_regions", std::move(regions)},
                             {"input_hash", record.input_hash},
                             {"output_hash", record.output_hash}});
        }
        t["edits"] = std::move(edits);
        t["observation_text"] = turn.observation_text;
        if (!turn.observation_digest.empty()) {
            t["observation_image"] = turn.observation_digest + ".png";
        } else {
            t["observation_image"] = nullptr;
        }
        turns.push_back(std::move(t));
    }
    j["turns"] = std::move(turns);
    return j.dump(2);
}

std::string save_episode(const Episode& episode, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [digest, raster] : episode.images) {
        std::filesystem::path path = std::filesystem::path(dir) / (digest + ".png");
        if (!std::filesystem::exists(path)) save_png_file(*raster, path.string());
    }
    std::filesystem::path json_path =
        std::filesystem::path(dir) / ("episode_" + episode.task_id + ".json");
    std::ofstream out(json_path);
    if (!out) throw StorageError("cannot write " + json_path.string());
    out << episode_to_json(episode) << "\n";
    return json_path.string();
}

} // namespace focal
