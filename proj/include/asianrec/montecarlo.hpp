#pragma once

#include "asianrec/domain.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace asianrec {

struct SimConfig {
    std::int64_t n_paths = 2'000'000;
    std::uint64_t seed = 20130101;
    bool antithetic = false;
    int workers = 1;

    bool operator==(const SimConfig&) const = default;
};

void validate_sim(const SimConfig& sim);

/// Receives each simulated path in path-index order.
using FixingSink = std::function<void(std::int64_t path, std::span<const double> fixings)>;

/// Exact GBM fixings S_i = S_{i-1} exp((r - sigma^2/2) tau + sigma sqrt(tau) Z).
void simulate_gbm_fixings(const Market& market, double sigma, const Schedule& schedule, const SimConfig& sim,
                          const FixingSink& sink);

/// VG fixings S_i = S_{i-1} exp((r + omega) tau + theta g + sigma sqrt(g) Z), g ~ Gamma(tau/nu, nu).
void simulate_vg_fixings(const Market& market, const VarianceGammaParams& vg, const Schedule& schedule,
                         const SimConfig& sim, const FixingSink& sink);

void simulate_fixings(const ModelParams& model, const Market& market, const Schedule& schedule,
                      const SimConfig& sim, const FixingSink& sink);

/// Discounted e^{-rT} ((1/N) sum S_{T_i} - E)^+, one result per strike, all
/// strikes on the same paths.
std::vector<MCResult> mc_asian_prices(const ModelParams& model, const Market& market, const Schedule& schedule,
                                      std::span<const double> strikes, const SimConfig& sim);
MCResult mc_asian_price(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
                        const SimConfig& sim);

std::vector<MCResult> mc_european_prices(const ModelParams& model, const Market& market, double tau,
                                         std::span<const double> strikes, const SimConfig& sim);
MCResult mc_european_price(const ModelParams& model, const Market& market, double tau, double strike,
                           const SimConfig& sim);

} // namespace asianrec
