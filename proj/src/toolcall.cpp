#include "focal/toolcall.hpp"

#include <algorithm>
#include <cctype>

#include "focal/errors.hpp"

namespace focal {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Cursor over the source; all matchers advance only on success.
struct Scanner {
    std::string_view text;
    size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    // Statements may wrap across lines; quoted strings may not.
    void skip_space() {
        while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) {
            ++pos;
        }
    }

    std::optional<std::string_view> ident() {
        skip_space();
        if (done() || !is_ident_start(peek())) return std::nullopt;
        size_t start = pos;
        while (!done() && is_ident_char(peek())) ++pos;
        return text.substr(start, pos - start);
    }

    bool literal(char c) {
        skip_space();
        if (done() || peek() != c) return false;
        ++pos;
        return true;
    }

    // "abc" or 'abc'; no escape sequences (labels never need them).
    std::optional<std::string> quoted() {
        skip_space();
        if (done() || (peek() != '"' && peek() != '\'')) return std::nullopt;
        char quote = peek();
        size_t start = ++pos;
        while (!done() && peek() != quote && peek() != '\n') ++pos;
        if (done() || peek() != quote) return std::nullopt;
        std::string out(text.substr(start, pos - start));
        ++pos;
        return out;
    }

    // ["a", 'b', ...]; empty list allowed, trailing comma tolerated.
    std::optional<std::vector<std::string>> string_list() {
        if (!literal('[')) return std::nullopt;
        std::vector<std::string> items;
        if (literal(']')) return items;
        while (true) {
            auto s = quoted();
            if (!s) return std::nullopt;
            items.push_back(std::move(*s));
            if (literal(']')) return items;
            if (!literal(',')) return std::nullopt;
            if (literal(']')) return items; // trailing comma
        }
    }
};

struct Statement {
    std::string callee;
    std::vector<std::string> targets;
    size_t begin;
    size_t end;
    bool well_formed; // arguments matched the grammar
};

// Matches one statement starting at `start`. Returns nullopt when the text
// there is not even call-shaped ([ident =] ident followed by "("); otherwise
// a Statement, well_formed only if the full grammar matched.
std::optional<Statement> match_statement(std::string_view text, size_t start) {
    Scanner s{text, start};
    auto first = s.ident();
    if (!first) return std::nullopt;

    std::string callee(*first);
    size_t save = s.pos;
    if (s.literal('=')) {
        if (!s.done() && s.peek() == '=') return std::nullopt; // comparison
        auto second = s.ident();
        if (!second) return std::nullopt;
        callee = std::string(*second);
    } else {
        s.pos = save;
    }

    if (!s.literal('(')) return std::nullopt;
    Statement stmt{std::move(callee), {}, start, s.pos, false};

    if (!s.ident()) return stmt; // image argument
    if (!s.literal(',')) return stmt;
    auto targets = s.string_list();
    if (!targets) return stmt;
    if (s.literal(',')) {
        if (!s.ident()) return stmt; // bbox-map argument
    }
    if (!s.literal(')')) return stmt;

    stmt.targets = std::move(*targets);
    stmt.end = s.pos;
    stmt.well_formed = true;
    return stmt;
}

} // namespace

bool ParseReport::has_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::string ParseReport::diagnostics_text() const {
    std::string out;
    for (const Diagnostic& d : diagnostics) {
        out += (d.severity == Severity::error ? "error: " : "warning: ") + d.message + "\n";
    }
    return out;
}

ParseReport extract_calls(std::string_view source) {
    ParseReport report;
    const bool answered = has_answer_marker(source);
    int discarded_for_answer = 0;

    size_t pos = 0;
    while (pos < source.size()) {
        if (!is_ident_start(source[pos]) || (pos > 0 && is_ident_char(source[pos - 1]))) {
            ++pos;
            continue;
        }
        auto stmt = match_statement(source, pos);
        if (!stmt) {
            // Prose or non-call code; skip the identifier we started at.
            while (pos < source.size() && is_ident_char(source[pos])) ++pos;
            continue;
        }

        auto tool = tool_from_surface(stmt->callee);
        if (!stmt->well_formed) {
            report.ignored_statements += 1;
            if (tool) {
                report.diagnostics.push_back(
                    {Severity::warning,
                     "malformed call to \"" + stmt->callee + "\"; expected " +
                         tool_signature(*tool),
                     stmt->begin, stmt->end});
            }
        } else if (!tool) {
            report.diagnostics.push_back({Severity::error,
                                          "unknown function \"" + stmt->callee + "\"",
                                          stmt->begin, stmt->end});
            report.ignored_statements += 1;
        } else if (answered) {
            report.ignored_statements += 1;
            discarded_for_answer += 1;
        } else {
            report.calls.push_back({*tool, stmt->targets, stmt->begin, stmt->end});
        }
        pos = stmt->end;
    }

    if (discarded_for_answer > 0) {
        report.diagnostics.push_back(
            {Severity::warning,
             "message contains an answer marker; editing calls were discarded", 0,
             source.size()});
    }
    return report;
}

std::vector<ToolCall> validate_calls(const ParseReport& report, const StructureLayout& layout) {
    for (const ToolCall& call : report.calls) {
        if (call.targets.empty()) {
            throw EmptyTargetsError(
                tool_info(call.tool).surface_name +
                (tool_method(call.tool) == ToolMethod::mask_keep
                     ? " with an empty keep-list would erase everything"
                     : " needs at least one target"));
        }
        const TargetClass cls = tool_target_class(call.tool);
        for (const std::string& target : call.targets) {
            (void)layout.resolve_target(cls, target);
        }
    }
    return report.calls;
}

bool has_answer_marker(std::string_view text) {
    if (text.find("FINAL ANSWER:") != std::string_view::npos) return true;
    size_t line_start = 0;
    while (line_start <= text.size()) {
        size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        std::string_view line = text.substr(line_start, line_end - line_start);
        size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line.substr(first).starts_with("ANSWER:")) {
            return true;
        }
        if (line_end == text.size()) break;
        line_start = line_end + 1;
    }
    return false;
}

std::optional<std::string> extract_final_answer(std::string_view text) {
    size_t pos = text.rfind("ANSWER:");
    if (pos == std::string_view::npos) return std::nullopt;
    std::string_view tail = text.substr(pos + 7);

    size_t term = tail.find("TERMINATE");
    if (term != std::string_view::npos) tail = tail.substr(0, term);

    std::string answer(tail);
    auto is_trim = [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == ',' || c == ';' ||
               c == ':' || c == '!';
    };
    while (!answer.empty() && std::isspace(static_cast<unsigned char>(answer.front()))) {
        answer.erase(answer.begin());
    }
    while (!answer.empty() && is_trim(answer.back())) {
        answer.pop_back();
    }
    return answer;
}

} // namespace focal
