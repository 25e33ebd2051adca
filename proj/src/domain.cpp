#include "asianrec/domain.hpp"

#include "asianrec/errors.hpp"

#include <cmath>
#include <string>

namespace asianrec {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) {
        throw PricingError(code, what);
    }
}

GridSpec snap(const GridSpec& g) {
    require(std::isfinite(g.w_min) && g.w_min > 0.0, ErrorCode::BadGrid, "w_min must be positive");
    require(g.w_max > g.w_min, ErrorCode::BadGrid, "w_max must exceed w_min");
    require(g.w_step > 0.0, ErrorCode::BadGrid, "w_step must be positive");
    require(std::isfinite(g.k_min) && g.k_min > 0.0, ErrorCode::BadGrid, "k_min must be positive");
    require(g.k_max > g.k_min, ErrorCode::BadGrid, "k_max must exceed k_min");
    require(g.k_step > 0.0, ErrorCode::BadGrid, "k_step must be positive");
    GridSpec out = g;
    out.w_max = g.w_grid().back();
    out.k_max = g.k_grid().back();
    require(g.w_grid().size >= 5, ErrorCode::BadGrid, "w grid needs at least 5 points");
    return out;
}

} // namespace

Schedule Schedule::from_days(int n_obs, double period_days, int days_per_year) {
    require(days_per_year > 0, ErrorCode::BadSchedule, "days_per_year must be positive");
    return Schedule{n_obs, period_days / days_per_year, days_per_year};
}

GridSpec GridSpec::black_scholes_default() {
    return GridSpec{0.0025, 2.0, 0.0025, 0.01, 2.0, 0.001};
}

GridSpec GridSpec::variance_gamma_default() {
    return GridSpec{0.005, 2.0, 0.005, 0.1, 2.0, 0.001};
}

GridSpec GridSpec::default_for(const ModelParams& model) {
    return std::holds_alternative<VarianceGammaParams>(model) ? variance_gamma_default()
                                                              : black_scholes_default();
}

UniformGrid GridSpec::w_grid() const { return snap_even(w_min, w_max, w_step); }

UniformGrid GridSpec::k_grid() const { return snap_even(k_min, k_max, k_step); }

double vg_admissibility(const VarianceGammaParams& vg) noexcept {
    return 1.0 - vg.theta * vg.nu - 0.5 * vg.sigma * vg.sigma * vg.nu;
}

void validate_model(const ModelParams& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            require(std::isfinite(m.sigma) && m.sigma > 0.0, ErrorCode::NonPositiveSigma,
                    "sigma must be positive, got " + std::to_string(m.sigma));
            if constexpr (std::is_same_v<T, VarianceGammaParams>) {
                require(std::isfinite(m.nu) && m.nu > 0.0, ErrorCode::NonPositiveNu,
                        "nu must be positive, got " + std::to_string(m.nu));
                require(std::isfinite(m.theta), ErrorCode::VGInadmissible, "theta must be finite");
                require(vg_admissibility(m) > 0.0, ErrorCode::VGInadmissible,
                        "1 - theta*nu - sigma^2*nu/2 = " + std::to_string(vg_admissibility(m)) +
                            " is not positive");
            }
        },
        model);
}

PricingConfig validate(const ModelParams& model, const Market& market, const Schedule& schedule,
                       const GridSpec& grid) {
    validate_model(model);
    require(std::isfinite(market.spot) && market.spot > 0.0, ErrorCode::BadMarket, "spot must be positive");
    require(std::isfinite(market.rate), ErrorCode::BadMarket, "rate must be finite");
    require(schedule.n_obs >= 1, ErrorCode::BadSchedule, "n_obs must be at least 1");
    require(std::isfinite(schedule.tau) && schedule.tau > 0.0, ErrorCode::BadSchedule, "tau must be positive");
    require(schedule.days_per_year > 0, ErrorCode::BadSchedule, "days_per_year must be positive");
    return PricingConfig{model, market, schedule, snap(grid)};
}

PricingConfig validate(const PricingConfig& config) {
    return validate(config.model, config.market, config.schedule, config.grid);
}

double discounted_average_forward(int ell, double rate, double tau) noexcept {
    double sum = 0.0;
    for (int i = 1; i <= ell; ++i) {
        sum += std::exp(rate * tau * (i - ell));
    }
    return sum / ell;
}

double sure_exercise_value(int ell, double w, double rate, double tau) noexcept {
    return discounted_average_forward(ell, rate, tau) - std::exp(-rate * ell * tau) * w;
}

} // namespace asianrec
