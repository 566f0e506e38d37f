#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bwmin {

enum class ErrorCode {
    InvalidProfile,
    EqualDeadlines,
    InsufficientBandwidth,
    InfeasibleReshaping,
    TooManyFlows,
    GridTooCoarse,
    InvalidInput,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace bwmin
