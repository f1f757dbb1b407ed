// The networked chat backend. httplib is included only here to keep it out
// of every other translation unit.

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "focal/chat.hpp"
#include "focal/errors.hpp"

namespace focal {

using nlohmann::json;

namespace {

// Splits "https://host:port/base" into (scheme://host:port, /base).
std::pair<std::string, std::string> split_url(const std::string& url) {
    size_t scheme_end = url.find("://");
    size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    size_t path_start = url.find('/', host_start);
    if (path_start == std::string::npos) return {url, ""};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value ? value : fallback;
}

} // namespace

HttpChatClient::HttpChatClient(HttpClientOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty()) {
        throw TransportError("no endpoint configured (set FOCAL_BASE_URL)");
    }
}

HttpChatClient HttpChatClient::from_env() {
    HttpClientOptions options;
    options.base_url = env_or("FOCAL_BASE_URL", "");
    options.api_key = env_or("FOCAL_API_KEY", "");
    return HttpChatClient(std::move(options));
}

std::string HttpChatClient::build_body(const ChatRequest& request) const {
    json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        json content = json::array();
        for (const Part& p : m.parts) {
            if (p.is_image()) {
                std::vector<uint8_t> png = save_png(*p.image);
                content.push_back(
                    {{"type", "image_url"},
                     {"image_url",
                      {{"url", "data:image/png;base64," + base64_encode(png)}}}});
            } else {
                content.push_back({{"type", "text"}, {"text", p.text}});
            }
        }
        messages.push_back({{"role", to_string(m.role)}, {"content", std::move(content)}});
    }
    body["messages"] = std::move(messages);
    return body.dump();
}

std::string HttpChatClient::complete(const ChatRequest& request) {
    auto [origin, base_path] = split_url(options_.base_url);
    const std::string path = base_path + options_.path;
    const std::string body = build_body(request);

    std::string last_error;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(500 << (attempt - 1)));
        }

        httplib::Client client(origin);
        client.set_connection_timeout(options_.timeout_seconds);
        client.set_read_timeout(options_.timeout_seconds);
        httplib::Headers headers;
        if (!options_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + options_.api_key);
        }

        auto result = client.Post(path, headers, body, "application/json");
        if (!result) {
            last_error = httplib::to_string(result.error());
            continue; // connect/read failure: retry
        }
        if (result->status == 401 || result->status == 403) {
            throw AuthError("endpoint rejected credentials (HTTP " +
                            std::to_string(result->status) + ")");
        }
        if (result->status == 429 || result->status >= 500) {
            last_error = "HTTP " + std::to_string(result->status);
            continue; // transient: retry
        }
        if (result->status != 200) {
            throw TransportError("HTTP " + std::to_string(result->status) + ": " + result->body);
        }

        json parsed = json::parse(result->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
            throw TransportError("malformed chat-completions response");
        }
        const json& message = parsed["choices"][0]["message"];
        if (!message.contains("content") || message["content"].is_null()) return "";
        return message["content"].get<std::string>();
    }
    throw TransportError("request failed after " + std::to_string(options_.max_attempts) +
                         " attempts: " + last_error);
}

} // namespace focal
