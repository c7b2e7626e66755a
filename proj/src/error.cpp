#include "lagflow/error.hpp"

namespace lagflow {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateSegment: return "DegenerateSegment";
        case ErrorCode::OriginContact: return "OriginContact";
        case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
        case ErrorCode::RefineGrid: return "RefineGrid";
        case ErrorCode::NotStarshaped: return "NotStarshaped";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::InsufficientBlowup: return "InsufficientBlowup";
        case ErrorCode::BadHorizon: return "BadHorizon";
        case ErrorCode::NoReturn: return "NoReturn";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::NotClosed: return "NotClosed";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
    }
    return "Unknown";
}

}  // namespace lagflow
