#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lagflow {

enum class ErrorCode {
    DegenerateSegment,
    OriginContact,
    NonIntegerWinding,
    RefineGrid,
    NotStarshaped,
    BlowUp,
    StepUnderflow,
    InsufficientBlowup,
    BadHorizon,
    NoReturn,
    NoRoot,
    NotClosed,
    InvalidSpec,
    IoError,
    EmptyGrid,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lagflow
