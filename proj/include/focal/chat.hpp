#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "focal/raster.hpp"

namespace focal {

enum class Role { system, user, assistant };

std::string to_string(Role role);

/// One message part: text, or a shared reference to an image.
struct Part {
    std::string text;
    std::shared_ptr<const Raster> image; // set => image part, text ignored

    static Part from_text(std::string t) { return {std::move(t), nullptr}; }
    static Part from_image(std::shared_ptr<const Raster> img) { return {{}, std::move(img)}; }
    bool is_image() const { return image != nullptr; }
};

struct ChatMessage {
    Role role = Role::user;
    std::vector<Part> parts;

    static ChatMessage text(Role role, std::string body);
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.0; // deterministic decoding by default
    int max_output_tokens = 1024;
    std::string model;
};

/// Canonical fingerprint of a request: sha256 over a key-sorted JSON document
///   {"max_output_tokens":..,"messages":[{"parts":[{"text":..}|
///    {"image_sha256":<pixel digest>}],"role":..}],"model":..,"temperature":..}
/// Text is UTF-8 as given; images contribute their pixel digest. Covered by a
/// golden test so recorded stores stay replayable across versions.
std::string request_fingerprint(const ChatRequest& request);

/// A multimodal chat endpoint. complete() returns the assistant text.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// Fingerprint-keyed response cache persisted as JSONL, one
/// {"fingerprint":..,"response":..} object per line.
class ReplayStore {
public:
    ReplayStore() = default;

    static ReplayStore load(const std::string& path);
    void save(const std::string& path) const;

    void put(const std::string& fingerprint, const std::string& response);
    std::optional<std::string> get(const std::string& fingerprint) const;
    size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::string> entries_;
};

/// Offline client: answers only from a recorded store; unknown fingerprints
/// raise ReplayMissError carrying the fingerprint for corpus repair.
class ReplayClient : public ChatClient {
public:
    explicit ReplayClient(ReplayStore store) : store_(std::move(store)) {}
    std::string complete(const ChatRequest& request) override;

private:
    ReplayStore store_;
};

/// Wraps any client and appends (fingerprint, response) pairs to a store
/// file after each completion. Writes are serialized; replaying the file
/// reproduces the run bit-for-bit.
class RecordingClient : public ChatClient {
public:
    RecordingClient(ChatClient& inner, std::string store_path);
    std::string complete(const ChatRequest& request) override;

private:
    ChatClient& inner_;
    std::string store_path_;
    std::mutex write_mutex_;
};

struct HttpClientOptions {
    std::string base_url;  // e.g. https://api.example.com or http://host:8000
    std::string api_key;
    std::string path = "/v1/chat/completions";
    int timeout_seconds = 120;
    int max_attempts = 3; // bounded exponential backoff between attempts
};

/// Networked client speaking the OpenAI-compatible chat-completions JSON
/// schema; image parts travel as base64 PNG data URLs. from_env() reads
/// FOCAL_BASE_URL and FOCAL_API_KEY (the model name rides on each request).
/// Throws TransportError after retries and AuthError on 401/403.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(HttpClientOptions options);
    static HttpChatClient from_env();

    std::string complete(const ChatRequest& request) override;

    /// Request body for the wire (exposed for tests).
    std::string build_body(const ChatRequest& request) const;

private:
    HttpClientOptions options_;
};

std::string base64_encode(std::span<const uint8_t> data);

} // namespace focal
