#pragma once

#include <stdexcept>
#include <string>

namespace hifd {

// Error taxonomy shared by the C++ core and the C API status codes.
enum class ErrorCode {
    invalid_argument = 1,   // bad configuration values, out-of-range parameters
    insufficient_data = 2,  // fewer rows/samples than an operation needs
    shape_mismatch = 3,     // dimension disagreement between operands
    invalid_input = 4,      // non-finite or otherwise unusable numeric input
    divergence = 5,         // training produced a non-finite loss
    degenerate_data = 6,    // data admits no usable model (rank collapse etc.)
    config = 7,             // config file/flag validation failure
    io = 8,                 // filesystem / parse failure
    version = 9,            // persisted artifact with unsupported version
    internal = 10,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace hifd
