#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "focal/edit_tools.hpp"
#include "focal/layout.hpp"

namespace focal {

/// One validated editing action parsed out of model text.
struct ToolCall {
    ToolId tool;
    std::vector<std::string> targets;
    size_t span_begin = 0; // byte offsets into the source text
    size_t span_end = 0;
};

enum class Severity { warning, error };

struct Diagnostic {
    Severity severity;
    std::string message;
    size_t span_begin = 0;
    size_t span_end = 0;
};

struct ParseReport {
    std::vector<ToolCall> calls; // in source order
    int ignored_statements = 0;
    std::vector<Diagnostic> diagnostics;

    bool has_errors() const;
    /// Diagnostics joined into the observation text sent back to the model.
    std::string diagnostics_text() const;
};

/// Scans model output (prose and fenced code alike) for statements shaped
///   [ident =] surface_name(ident, ["a", 'b', ...] [, ident])
/// Registered names become calls; call-shaped statements with unregistered
/// names become error diagnostics; everything else call-like is counted as
/// ignored. Never executes anything, never throws, single pass over the text.
/// An ANSWER / FINAL ANSWER marker takes precedence: any calls alongside it
/// are dropped with a warning.
ParseReport extract_calls(std::string_view source);

/// Re-checks every call against a concrete layout: target class must apply
/// and every target must resolve (exact, case-insensitive, then
/// whitespace-normalized). Returns the calls unchanged. Throws
/// UnknownTargetError or TargetClassMismatchError.
std::vector<ToolCall> validate_calls(const ParseReport& report, const StructureLayout& layout);

// -- Answer-protocol text helpers shared with the agent loop.

/// True when the text declares an answer: it contains "FINAL ANSWER:" or a
/// line that starts with "ANSWER:".
bool has_answer_marker(std::string_view text);

/// Text after the last "ANSWER:"-family marker, cut at "TERMINATE", trimmed
/// of whitespace and trailing punctuation. nullopt when no marker exists.
std::optional<std::string> extract_final_answer(std::string_view text);

} // namespace focal
