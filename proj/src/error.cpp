#include "ghzlab/error.hpp"

namespace ghzlab {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::DimensionMismatch: return "dimension mismatch";
        case ErrorCode::NonHermitian: return "non-Hermitian observable";
        case ErrorCode::Unassigned: return "unassigned variable";
        case ErrorCode::LimitExceeded: return "limit exceeded";
        case ErrorCode::ZeroProbabilityBranch: return "zero-probability branch";
        case ErrorCode::Parse: return "parse error";
        case ErrorCode::Io: return "I/O error";
    }
    return "unknown error";
}

}  // namespace ghzlab
