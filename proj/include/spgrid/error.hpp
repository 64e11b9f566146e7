#pragma once

#include <stdexcept>
#include <string>

namespace spgrid {

enum class ErrorCode {
    Validation,
    DegenerateMesh,
    NoRoot,
    NonpositiveCoefficient,
    ZeroPivot,
    NoConvergence,
    NonpositiveJacobian,
    SingularDiffusion,
    OutOfDomain,
    MissingExact,
    DegenerateError,
    Domain,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace spgrid
