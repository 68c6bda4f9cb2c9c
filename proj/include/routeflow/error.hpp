#pragma once

#include <stdexcept>
#include <string>

namespace routeflow {

enum class ErrorCode {
    EmptyInput,
    DegenerateExtent,
    CyclicGraph,
    IdMismatch,
    DegenerateInk,
    GenerationFailed,
    ParseError,
    UsageError,
    IoError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateExtent: return "DegenerateExtent";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::DegenerateInk: return "DegenerateInk";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace routeflow
