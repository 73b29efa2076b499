#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaitdcs {

enum class ErrorCode {
    InvalidArgument,
    DegenerateQuad,
    SingularSystem,
    PointAtInfinity,
    UncorrectableElevation,
    NonPositiveSigma,
    NoForeground,
    DuplicateLabels,
    SingleClassInput,
    MissingClassSamples,
    DimensionMismatch,
    EmptyStream,
    InadmissibleViewpointJump,
    InadmissibleTransition,
    EmptySequence,
    LengthMismatch,
    IoFailure,
    FormatError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type thrown by every module. `code()` identifies the failure
/// class so callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gaitdcs
