#include "offload/error.hpp"

namespace offload {
namespace {

std::string join_violations(const std::string& context, const std::vector<std::string>& violations) {
    std::string out = context;
    for (const auto& v : violations) {
        out += "\n  - ";
        out += v;
    }
    return out;
}

std::string located(const std::string& message, std::size_t line, const std::string& field) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "at '" + field + "': ";
    return out + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::string field)
    : Error(located(message, line, field)), line_(line), field_(std::move(field)) {}

ValidationError::ValidationError(std::vector<std::string> violations)
    : ValidationError("validation failed", std::move(violations)) {}

ValidationError::ValidationError(const std::string& context, std::vector<std::string> violations)
    : Error(join_violations(context, violations)), violations_(std::move(violations)) {}

UnknownIdError::UnknownIdError(const std::string& id) : Error("unknown id '" + id + "'"), id_(id) {}

InsufficientFleetError::InsufficientFleetError(std::size_t stage, std::size_t required, std::size_t available)
    : SimulationError("insufficient fleet: stage " + std::to_string(stage) + " runs " + std::to_string(required) +
                      " offloadable chains in parallel but the fleet has " + std::to_string(available) + " VM(s)"),
      stage_(stage),
      required_(required),
      available_(available) {}

}  // namespace offload
