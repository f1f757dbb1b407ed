#include "focal/errors.hpp"

#include <sstream>

namespace focal {

namespace {

std::string label_message(const char* kind, const std::string& label,
                          const std::vector<std::string>& available) {
    std::ostringstream msg;
    msg << kind << " \"" << label << "\"; available:";
    if (available.empty()) {
        msg << " (none)";
    } else {
        for (size_t i = 0; i < available.size(); ++i) {
            msg << (i ? ", " : " ") << "\"" << available[i] << "\"";
        }
    }
    return msg.str();
}

} // namespace

UnknownLabelError::UnknownLabelError(std::string label_, std::vector<std::string> available_)
    : Error(label_message("unknown label", label_, available_)),
      label(std::move(label_)),
      available(std::move(available_)) {}

UnknownTargetError::UnknownTargetError(std::string label_, std::vector<std::string> available_)
    : Error(label_message("unknown target", label_, available_)),
      label(std::move(label_)),
      available(std::move(available_)) {}

ReplayMissError::ReplayMissError(std::string fingerprint_)
    : Error("no recorded response for request fingerprint " + fingerprint_),
      fingerprint(std::move(fingerprint_)) {}

SchemaError::SchemaError(int line_, const std::string& what)
    : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}

} // namespace focal
