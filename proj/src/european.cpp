#include "asianrec/european.hpp"

#include "asianrec/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace asianrec {

namespace {

constexpr double kMinStdDev = 1e-12;

void check_domain(double x, double K, double sigma, double tau) {
    if (!(x > 0.0) || !(tau > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "spot and maturity must be positive");
    }
    if (!(K >= 0.0)) {
        throw PricingError(ErrorCode::DomainError, "strike must be nonnegative");
    }
    if (!(sigma > 0.0)) {
        throw PricingError(ErrorCode::NonPositiveSigma, "volatility must be positive");
    }
}

struct D12 {
    double d1;
    double d2;
    double sd;
};

D12 d12(double x, double K, double r, double sigma, double tau) {
    const double sd = sigma * std::sqrt(tau);
    const double d1 = (std::log(x / K) + (r + 0.5 * sigma * sigma) * tau) / sd;
    return {d1, d1 - sd, sd};
}

} // namespace

double norm_cdf(double x) noexcept { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double norm_pdf(double x) noexcept { return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2; }

double bs_call(double x, double K, double r, double sigma, double tau) {
    check_domain(x, K, sigma, tau);
    const double df = std::exp(-r * tau);
    if (K == 0.0) {
        return x;
    }
    if (sigma * std::sqrt(tau) < kMinStdDev) {
        return std::max(x - K * df, 0.0);
    }
    const auto [d1, d2, sd] = d12(x, K, r, sigma, tau);
    return std::max(x * norm_cdf(d1) - K * df * norm_cdf(d2), 0.0);
}

double put_from_call(double call, double x, double K, double r, double tau) noexcept {
    const double put = call - x + K * std::exp(-r * tau);
    if (put < -1e-8) {
        spdlog::debug("put_from_call: parity put {} floored at 0 (x={}, K={})", put, x, K);
    }
    return std::max(put, 0.0);
}

BSGreeks bs_greeks(double x, double K, double r, double sigma, double tau) {
    check_domain(x, K, sigma, tau);
    if (!(K > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "greeks need a positive strike");
    }
    const double df = std::exp(-r * tau);
    const auto [d1, d2, sd] = d12(x, K, r, sigma, tau);
    BSGreeks g;
    g.dc_dx = norm_cdf(d1);
    g.dc_dK = -df * norm_cdf(d2);
    g.d2c_dx2 = norm_pdf(d1) / (x * sd);
    g.d2c_dK2 = df * norm_pdf(d2) / (K * sd);
    g.d2c_dxdK = -norm_pdf(d1) / (K * sd);
    return g;
}

double EuropeanPricer::put(double x, double K) const {
    return put_from_call(call(x, K), x, K, rate(), tau());
}

double EuropeanPricer::phi(double x, double K) const {
    if (!(K > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "phi needs a positive strike");
    }
    return K <= std::exp(rate() * tau()) * x ? put(x, K) : call(x, K);
}

double phi(double x, double K, const EuropeanPricer& pricer) { return pricer.phi(x, K); }

BlackScholesPricer::BlackScholesPricer(double sigma, double rate, double tau)
    : sigma_(sigma), rate_(rate), tau_(tau) {
    if (!(sigma > 0.0)) {
        throw PricingError(ErrorCode::NonPositiveSigma, "volatility must be positive");
    }
    if (!(tau > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "maturity must be positive");
    }
}

double BlackScholesPricer::call(double x, double K) const { return bs_call(x, K, rate_, sigma_, tau_); }

double BlackScholesPricer::put(double x, double K) const {
    check_domain(x, K, sigma_, tau_);
    const double df = std::exp(-rate_ * tau_);
    if (K == 0.0) {
        return 0.0;
    }
    if (sigma_ * std::sqrt(tau_) < kMinStdDev) {
        return std::max(K * df - x, 0.0);
    }
    const auto [d1, d2, sd] = d12(x, K, rate_, sigma_, tau_);
    return std::max(K * df * norm_cdf(-d2) - x * norm_cdf(-d1), 0.0);
}

} // namespace asianrec
