#pragma once

#include <stdexcept>
#include <string>

namespace hessmetric {

enum class ErrorCode {
    Domain = 1,
    Convexity,
    Boundary,
    Coordinate,
    Membership,
    UnboundedMass,
    Arity,
    Iteration,
    Parse,
    Usage,
    InvalidArgument,
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace hessmetric
