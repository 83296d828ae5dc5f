#include "surfstokes/errors.hpp"

namespace surfstokes {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Config: return "E_CONFIG";
        case ErrorCode::NonConvergence: return "E_NONCONVERGENCE";
        case ErrorCode::DegenerateGradient: return "E_DEGENERATE_GRADIENT";
        case ErrorCode::DegenerateElement: return "E_DEGENERATE_ELEMENT";
        case ErrorCode::SingularMatrix: return "E_SINGULAR_MATRIX";
        case ErrorCode::TooLarge: return "E_TOO_LARGE";
        case ErrorCode::Domain: return "E_DOMAIN";
        case ErrorCode::Io: return "E_IO";
        case ErrorCode::Internal: return "E_INTERNAL";
    }
    return "E_INTERNAL";
}

}  // namespace surfstokes
