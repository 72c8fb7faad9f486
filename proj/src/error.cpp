#include "hessmetric/error.hpp"

namespace hessmetric {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Convexity: return "convexity violation";
    case ErrorCode::Boundary: return "boundary violation";
    case ErrorCode::Coordinate: return "coordinate error";
    case ErrorCode::Membership: return "membership error";
    case ErrorCode::UnboundedMass: return "unbounded mass";
    case ErrorCode::Arity: return "arity error";
    case ErrorCode::Iteration: return "iteration failure";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Usage: return "usage error";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Internal: return "internal error";
    }
    return "unknown error";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace hessmetric
