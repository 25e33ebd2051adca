#pragma once

#include "asianrec/numerics.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace asianrec {

struct BlackScholesParams {
    double sigma = 0.2;

    bool operator==(const BlackScholesParams&) const = default;
};

/// Variance-Gamma: Brownian motion with drift theta and volatility sigma run
/// on a Gamma clock with unit mean rate and variance rate nu.
struct VarianceGammaParams {
    double sigma = 0.3;
    double nu = 0.3;
    double theta = -0.1;

    bool operator==(const VarianceGammaParams&) const = default;
};

using ModelParams = std::variant<BlackScholesParams, VarianceGammaParams>;

struct Market {
    double spot = 100.0;
    double rate = 0.0;

    bool operator==(const Market&) const = default;
};

/// n_obs equally spaced observations, the first one tau after the valuation date.
struct Schedule {
    int n_obs = 1;
    double tau = 1.0 / 365.0;
    int days_per_year = 365;

    static Schedule from_days(int n_obs, double period_days, int days_per_year = 365);

    double observation_time(int n) const noexcept { return n * tau; }
    double maturity() const noexcept { return n_obs * tau; }
};

/// Normalized-strike grid for the Asian curves and strike grid for the
/// integral against one-period option prices, both at unit spot.
struct GridSpec {
    double w_min = 0.0025;
    double w_max = 2.0;
    double w_step = 0.0025;
    double k_min = 0.01;
    double k_max = 2.0;
    double k_step = 0.001;

    static GridSpec black_scholes_default();
    static GridSpec variance_gamma_default();
    static GridSpec default_for(const ModelParams& model);

    UniformGrid w_grid() const;
    UniformGrid k_grid() const;

    bool operator==(const GridSpec&) const = default;
};

/// Sampled price curve of an l-observation arithmetic Asian call at unit
/// spot, as a function of the normalized strike w.
struct NormalizedCurve {
    int ell = 1;
    UniformGrid w_grid;
    std::vector<double> values;
    std::vector<double> second_derivs;
};

/// One-period out-of-the-money option prices phi(1, K) on the integration grid.
struct PhiCurve {
    UniformGrid k_grid;
    std::vector<double> phi_values;
};

struct MCResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
};

struct PricingConfig {
    ModelParams model;
    Market market;
    Schedule schedule;
    GridSpec grid;
};

/// Checks every invariant and snaps both grids to an even number of
/// subintervals. Throws PricingError naming the first violation.
PricingConfig validate(const ModelParams& model, const Market& market, const Schedule& schedule,
                       const GridSpec& grid);
PricingConfig validate(const PricingConfig& config);

void validate_model(const ModelParams& model);

/// 1 - theta*nu - sigma^2*nu/2, which must be positive for the VG drift correction to exist.
double vg_admissibility(const VarianceGammaParams& vg) noexcept;

/// e^{-r l tau} * (1/l) * sum_{i=1..l} e^{r i tau}: value of the discounted
/// average forward at unit spot, the l-observation Asian price at strike 0.
double discounted_average_forward(int ell, double rate, double tau) noexcept;

/// Exact Asian value at unit spot when exercise is certain (w <= 0).
double sure_exercise_value(int ell, double w, double rate, double tau) noexcept;

} // namespace asianrec
