#include "hifd/error.hpp"

namespace hifd {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::insufficient_data: return "insufficient-data";
        case ErrorCode::shape_mismatch: return "shape-mismatch";
        case ErrorCode::invalid_input: return "invalid-input";
        case ErrorCode::divergence: return "training-divergence";
        case ErrorCode::degenerate_data: return "degenerate-data";
        case ErrorCode::config: return "configuration";
        case ErrorCode::io: return "io";
        case ErrorCode::version: return "version";
        case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

}  // namespace hifd
