#pragma once

#include <stdexcept>
#include <string>

namespace surfstokes {

enum class ErrorCode {
    Config = 1,
    NonConvergence,
    DegenerateGradient,
    DegenerateElement,
    SingularMatrix,
    TooLarge,
    Domain,
    Io,
    Internal,
};

/// Stable machine-readable name, e.g. "E_CONFIG".
const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define SURFSTOKES_THROW_IF(cond, code, msg)                                   \
    do {                                                                       \
        if (cond) throw ::surfstokes::Error((code), (msg));                    \
    } while (0)

}  // namespace surfstokes
