#include "spgrid/error.hpp"

namespace spgrid {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation: return "Validation";
        case ErrorCode::DegenerateMesh: return "DegenerateMesh";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::NonpositiveCoefficient: return "NonpositiveCoefficient";
        case ErrorCode::ZeroPivot: return "ZeroPivot";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NonpositiveJacobian: return "NonpositiveJacobian";
        case ErrorCode::SingularDiffusion: return "SingularDiffusion";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::MissingExact: return "MissingExact";
        case ErrorCode::DegenerateError: return "DegenerateError";
        case ErrorCode::Domain: return "Domain";
    }
    return "Unknown";
}

}  // namespace spgrid
