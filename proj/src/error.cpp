#include "gaitdcs/error.hpp"

namespace gaitdcs {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateQuad: return "DegenerateQuad";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::PointAtInfinity: return "PointAtInfinity";
        case ErrorCode::UncorrectableElevation: return "UncorrectableElevation";
        case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
        case ErrorCode::NoForeground: return "NoForeground";
        case ErrorCode::DuplicateLabels: return "DuplicateLabels";
        case ErrorCode::SingleClassInput: return "SingleClassInput";
        case ErrorCode::MissingClassSamples: return "MissingClassSamples";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyStream: return "EmptyStream";
        case ErrorCode::InadmissibleViewpointJump: return "InadmissibleViewpointJump";
        case ErrorCode::InadmissibleTransition: return "InadmissibleTransition";
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::FormatError: return "FormatError";
    }
    return "Unknown";
}

}  // namespace gaitdcs
