#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "focal/chat.hpp"
#include "focal/edit_tools.hpp"
#include "focal/layout.hpp"
#include "focal/raster.hpp"
#include "focal/toolcall.hpp"

namespace focal {

/// One (image, question) unit of work.
struct Task {
    std::string id;
    std::shared_ptr<const Raster> image;
    std::string question;
    StructureLayout layout;
    std::optional<std::string> gold_answer;
    std::string source; // dataset tag, e.g. "vwtq", "h_bar", "synth"
};

struct AgentConfig {
    int max_turns = 5;
    std::string model = "gpt-4o";
    double temperature = 0.0;
    int max_output_tokens = 1024;
};

/// One model turn: what the model said, what was parsed and applied, and the
/// observation that was sent back.
struct Turn {
    std::string assistant_text;
    std::vector<ToolCall> calls;
    std::vector<EditRecord> edit_records;
    std::string observation_text;   // empty on the answering turn
    std::string observation_digest; // pixel digest of the image shown next, if any
};

struct Episode {
    std::string task_id;
    std::string source;
    std::vector<Turn> turns;

    enum class Status { running, answered, failed } status = Status::running;
    std::string final_answer;    // answered only
    std::string raw_answer_text; // full text of the answering message
    std::string fail_reason;     // failed only
    bool edited = false;

    std::string initial_digest;
    /// Content-addressed raster store for everything referenced by digests.
    std::vector<std::pair<std::string, std::shared_ptr<const Raster>>> images;

    std::shared_ptr<const Raster> image_by_digest(const std::string& digest) const;
};

/// Drives one episode: build prompt -> complete -> step, composing edits on
/// the newest image until an answer or the turn limit.
class EpisodeRun {
public:
    EpisodeRun(Task task, AgentConfig config);

    bool finished() const;
    ChatRequest next_request() const;

    /// Consumes one assistant message: either extracts the final answer, or
    /// parses and applies edit calls and queues the next observation. Parse
    /// and validation problems become a diagnostic observation (one repair
    /// message per turn); the turn still counts toward max_turns.
    void step(const std::string& assistant_text);

    const Episode& episode() const { return episode_; }
    Episode take_episode() { return std::move(episode_); }

private:
    void append_observation(const std::string& text, std::shared_ptr<const Raster> image);

    Task task_;
    AgentConfig config_;
    Episode episode_;
    std::vector<ChatMessage> messages_;
    std::shared_ptr<const Raster> current_;
    bool last_turn_failed_ = false;
};

/// System + user messages for a task: assistant role text, the tool surface
/// list for the task's layout class, the answer protocol, the image and the
/// layout serialized as canonical JSON bounding boxes.
std::vector<ChatMessage> build_initial_prompt(const Task& task);

/// Runs one episode to completion. TransportError becomes
/// status failed("transport").
Episode run(const Task& task, ChatClient& client, const AgentConfig& config = {});

/// Up to `workers` episodes in flight at once; order of results matches
/// the input order.
std::vector<Episode> run_batch(const std::vector<Task>& tasks, ChatClient& client,
                               const AgentConfig& config = {}, int workers = 4);

/// Fraction of episodes with at least one edit, per source tag.
std::map<std::string, double> edit_rate(std::span<const Episode> episodes);

/// Episode as JSON with image references as "<digest>.png".
std::string episode_to_json(const Episode& episode);

/// Writes every referenced image as <digest>.png plus
/// episode_<task_id>.json under dir; returns the JSON path.
std::string save_episode(const Episode& episode, const std::string& dir);

} // namespace focal
