#include "focal/chat.hpp"

#include <fstream>

#include <json.hpp>

#include "focal/digest.hpp"
#include "focal/errors.hpp"

namespace focal {

using nlohmann::json;

std::string to_string(Role role) {
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    }
    return "?";
}

ChatMessage ChatMessage::text(Role role, std::string body) {
    ChatMessage m;
    m.role = role;
    m.parts.push_back(Part::from_text(std::move(body)));
    return m;
}

std::string request_fingerprint(const ChatRequest& request) {
    json doc;
    doc["model"] = request.model;
    doc["temperature"] = request.temperature;
    doc["max_output_tokens"] = request.max_output_tokens;
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        json parts = json::array();
        for (const Part& p : m.parts) {
            if (p.is_image()) {
                parts.push_back({{"image_sha256", pixel_digest(*p.image)}});
            } else {
                parts.push_back({{"text", p.text}});
            }
        }
        messages.push_back({{"role", to_string(m.role)}, {"parts", std::move(parts)}});
    }
    doc["messages"] = std::move(messages);
    // json objects serialize key-sorted, which is the canonical order.
    return sha256_hex(std::string_view(doc.dump()));
}

ReplayStore ReplayStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StorageError("cannot open replay store " + path);
    ReplayStore store;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("fingerprint") || !j.contains("response")) {
            throw StorageError("replay store " + path + " line " + std::to_string(line_no) +
                               " is not a {fingerprint, response} object");
        }
        store.entries_[j["fingerprint"].get<std::string>()] = j["response"].get<std::string>();
    }
    return store;
}

void ReplayStore::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StorageError("cannot write replay store " + path);
    for (const auto& [fingerprint, response] : entries_) {
        json j{{"fingerprint", fingerprint}, {"response", response}};
        out << j.dump() << "\n";
    }
    if (!out) throw StorageError("short write to replay store " + path);
}

void ReplayStore::put(const std::string& fingerprint, const std::string& response) {
    entries_[fingerprint] = response;
}

std::optional<std::string> ReplayStore::get(const std::string& fingerprint) const {
    auto it = entries_.find(fingerprint);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string ReplayClient::complete(const ChatRequest& request) {
    std::string fingerprint = request_fingerprint(request);
    auto response = store_.get(fingerprint);
    if (!response) throw ReplayMissError(fingerprint);
    return *response;
}

RecordingClient::RecordingClient(ChatClient& inner, std::string store_path)
    : inner_(inner), store_path_(std::move(store_path)) {}

std::string RecordingClient::complete(const ChatRequest& request) {
    std::string response = inner_.complete(request);
    std::string fingerprint = request_fingerprint(request);
    {
        std::lock_guard<std::mutex> lock(write_mutex_);
        std::ofstream out(store_path_, std::ios::app);
        if (!out) throw StorageError("cannot append to replay store " + store_path_);
        json j{{"fingerprint", fingerprint}, {"response", response}};
        out << j.dump() << "\n";
    }
    return response;
}

std::string base64_encode(std::span<const uint8_t> data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        uint32_t v = (uint32_t(data[i]) << 16) | (uint32_t(data[i + 1]) << 8) | data[i + 2];
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
    }
    if (i + 1 == data.size()) {
        uint32_t v = uint32_t(data[i]) << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == data.size()) {
        uint32_t v = (uint32_t(data[i]) << 16) | (uint32_t(data[i + 1]) << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

} // namespace focal
