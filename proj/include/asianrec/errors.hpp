#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asianrec {

enum class ErrorCode {
    NonPositiveSigma,
    NonPositiveNu,
    VGInadmissible,
    BadMarket,
    BadSchedule,
    BadGrid,
    BadFFTConfig,
    BadSimConfig,
    BadFixings,
    ConfigError,
    DomainError,
    BranchCut,
    OutOfCoverage,
    GridTooCoarse,
    StrikeOutOfGrid,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Configuration errors map to CLI exit code 2, numerical failures to 3.
bool is_configuration_error(ErrorCode code) noexcept;

class PricingError : public std::runtime_error {
public:
    PricingError(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

} // namespace asianrec
