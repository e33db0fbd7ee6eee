#include "declutter/error.hpp"

namespace declutter {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::PlacementExhausted: return "PlacementExhausted";
        case ErrorCode::InfeasibleAction: return "InfeasibleAction";
        case ErrorCode::EmptyTrace: return "EmptyTrace";
        case ErrorCode::MissingBaseline: return "MissingBaseline";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace declutter
