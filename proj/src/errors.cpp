#include "asianrec/errors.hpp"

namespace asianrec {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::NonPositiveNu: return "NonPositiveNu";
    case ErrorCode::VGInadmissible: return "VGInadmissible";
    case ErrorCode::BadMarket: return "BadMarket";
    case ErrorCode::BadSchedule: return "BadSchedule";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::BadFFTConfig: return "BadFFTConfig";
    case ErrorCode::BadSimConfig: return "BadSimConfig";
    case ErrorCode::BadFixings: return "BadFixings";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::OutOfCoverage: return "OutOfCoverage";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::StrikeOutOfGrid: return "StrikeOutOfGrid";
    }
    return "Unknown";
}

bool is_configuration_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DomainError:
    case ErrorCode::BranchCut:
    case ErrorCode::OutOfCoverage:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::StrikeOutOfGrid:
        return false;
    default:
        return true;
    }
}

PricingError::PricingError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

} // namespace asianrec
