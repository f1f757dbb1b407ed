#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace focal {

// Root of every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DecodeError : Error {
    using Error::Error;
};

struct EmptyRegionError : Error {
    EmptyRegionError() : Error("region clamps to an empty rectangle") {}
    explicit EmptyRegionError(const std::string& what) : Error(what) {}
};

struct LayoutMismatchError : Error {
    using Error::Error;
};

struct DetectionFailedError : Error {
    using Error::Error;
};

struct UnknownLabelError : Error {
    std::string label;
    std::vector<std::string> available;
    UnknownLabelError(std::string label_, std::vector<std::string> available_);
};

// Same payload as UnknownLabelError; raised when a tool target fails to resolve.
struct UnknownTargetError : Error {
    std::string label;
    std::vector<std::string> available;
    UnknownTargetError(std::string label_, std::vector<std::string> available_);
};

struct TargetClassMismatchError : Error {
    using Error::Error;
};

struct EmptyTargetsError : Error {
    EmptyTargetsError() : Error("tool call has no targets") {}
    explicit EmptyTargetsError(const std::string& what) : Error(what) {}
};

struct SpecError : Error {
    using Error::Error;
};

struct TransportError : Error {
    using Error::Error;
};

struct AuthError : Error {
    using Error::Error;
};

struct ReplayMissError : Error {
    std::string fingerprint;
    explicit ReplayMissError(std::string fingerprint_);
};

struct StorageError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    int line = 0;
    SchemaError(int line_, const std::string& what);
};

struct JudgeUnavailableError : Error {
    JudgeUnavailableError() : Error("external_judge scoring requires a chat client") {}
};

} // namespace focal
