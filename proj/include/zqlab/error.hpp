#pragma once

#include <stdexcept>
#include <string>

namespace zqlab {

enum class ErrorCode {
    invalid_modulus,
    invalid_argument,
    invalid_lambda,
    invalid_fraction,
    invalid_params,
    too_large,
    structure,
    mapping,
    io,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_modulus: return "invalid-modulus";
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::invalid_lambda: return "invalid-lambda";
        case ErrorCode::invalid_fraction: return "invalid-fraction";
        case ErrorCode::invalid_params: return "invalid-params";
        case ErrorCode::too_large: return "too-large";
        case ErrorCode::structure: return "structure";
        case ErrorCode::mapping: return "mapping";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace zqlab
