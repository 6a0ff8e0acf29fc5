#pragma once

#include <stdexcept>
#include <string>

namespace toda {

enum class ErrorCode {
    InvalidArgument,
    PoleAtNonPositiveInteger,
    IntegerArgument,
    WallDegeneracy,
    GammaPole,
    DomainViolation,
    SeriesDivergence,
    BParameterNonPositiveInteger,
    NonGenericParameters,
    CoincidentPoints,
    NotPositiveDefinite,
    SeibergViolation,
    MomentViolation,
    WindowViolation,
    Interrupted,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// l(x) at an integer argument: zero for x >= 1, pole for x <= 0.
class IntegerArgumentError : public Error {
public:
    IntegerArgumentError(bool is_pole, const std::string& what)
        : Error(ErrorCode::IntegerArgument, what + (is_pole ? " (pole)" : " (zero)")),
          is_pole_(is_pole) {}
    bool is_pole() const noexcept { return is_pole_; }

private:
    bool is_pole_;
};

}  // namespace toda
