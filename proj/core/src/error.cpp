#include "bwmin/error.hpp"

namespace bwmin {

std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::EqualDeadlines: return "EqualDeadlines";
    case ErrorCode::InsufficientBandwidth: return "InsufficientBandwidth";
    case ErrorCode::InfeasibleReshaping: return "InfeasibleReshaping";
    case ErrorCode::TooManyFlows: return "TooManyFlows";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

} // namespace bwmin
