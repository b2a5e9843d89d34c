#include "nodal/types.hpp"

namespace nodal {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::RetrogradeSingularity: return "RetrogradeSingularity";
        case ErrorCode::GeometryError: return "GeometryError";
        case ErrorCode::StepFailure: return "StepFailure";
        case ErrorCode::CoplanarNormalInput: return "CoplanarNormalInput";
        case ErrorCode::Theta1Degenerate: return "Theta1Degenerate";
        case ErrorCode::ZetaUndefined: return "ZetaUndefined";
        case ErrorCode::ZeroSensitivity: return "ZeroSensitivity";
        case ErrorCode::ZeroRange: return "ZeroRange";
        case ErrorCode::InfeasibleEncounter: return "InfeasibleEncounter";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace nodal
