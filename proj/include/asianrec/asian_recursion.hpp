#pragma once

#include "asianrec/domain.hpp"
#include "asianrec/european.hpp"
#include "asianrec/levy_fft.hpp"
#include "asianrec/numerics.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace asianrec {

/// Simpson: Simpson's rule on the strike grid. Measure: the integral against
/// A'' summed as a measure over the w grid, which keeps the mass of kinks.
enum class Quadrature { Simpson, Measure };

struct RecursionConfig {
    GridSpec grid = GridSpec::black_scholes_default();
    Interpolation interpolation = Interpolation::MonotoneCubic;
    Quadrature quadrature = Quadrature::Simpson;
    /// Off: any evaluation outside the w grid throws OutOfCoverage instead of
    /// using the sure-exercise line on the left and zero on the right.
    bool extrapolate = true;
    bool clamp_negative_second_deriv = true;
    /// Replace each new curve by its greatest convex minorant on the w grid.
    bool convex_repair = true;
    FFTConfig fft;
    int workers = 1;

    static RecursionConfig defaults_for(const ModelParams& model);
};

struct StepDiagnostics {
    int ell = 0;
    double clamped_mass = 0.0;
    double truncation_estimate = 0.0;
    /// Largest value decrease made by the convex repair.
    double convex_repair = 0.0;
};

/// Evaluates a sampled curve anywhere on the real line: interpolation inside
/// the grid, the sure-exercise line left of it and zero right of it.
class CurveEvaluator {
public:
    CurveEvaluator(const NormalizedCurve& curve, double rate, double tau, Interpolation kind, bool extrapolate = true);

    double value(double w) const;
    double first_derivative(double w) const;
    double second_derivative(double w) const;

    const NormalizedCurve& curve() const noexcept { return *curve_; }

private:
    bool inside(double w) const;

    const NormalizedCurve* curve_;
    double rate_;
    double tau_;
    bool extrapolate_;
    UniformInterpolant values_;
    UniformInterpolant first_;
    UniformInterpolant second_;
};

/// One-observation curve: the unit-spot call c(1, w) on the w grid, clamped
/// to the no-arbitrage band.
NormalizedCurve base_curve(const EuropeanPricer& pricer, const GridSpec& grid);

PhiCurve make_phi_curve(const EuropeanPricer& pricer, const GridSpec& grid);

/// Fills curve.second_derivs by differences. Returns the total mass of
/// negative second derivatives floored to zero (0 when clamp is off).
double second_derivative(NormalizedCurve& curve, bool clamp = true);

/// Builds the l-observation curve from the (l-1)-observation curve. Values
/// are clamped to the no-arbitrage band before the convex repair.
NormalizedCurve recursion_step(const NormalizedCurve& prev, const PhiCurve& phi, double rate, double tau,
                               const RecursionConfig& cfg, StepDiagnostics* diagnostics = nullptr);

/// Pricing engine for one model, market and schedule. Curves are built on
/// demand and cached, so many strikes share one recursion run.
class AsianRecursion {
public:
    AsianRecursion(const ModelParams& model, const Market& market, const Schedule& schedule,
                   RecursionConfig cfg);

    double price(double strike);
    double delta(double strike);
    /// Price one period before the next fixing after observing `fixings`.
    double seasoned_price(double strike, std::span<const double> fixings);

    /// References stay valid for the engine's lifetime.
    const NormalizedCurve& curve(int ell);
    CurveEvaluator evaluator(int ell);

    const EuropeanPricer& pricer() const noexcept { return *pricer_; }
    const PhiCurve& phi_curve() const noexcept { return phi_; }
    const PricingConfig& config() const noexcept { return config_; }
    const RecursionConfig& recursion_config() const noexcept { return cfg_; }
    const std::vector<StepDiagnostics>& diagnostics() const noexcept { return diagnostics_; }

private:
    double curve_value(int ell, double w, double strike);

    PricingConfig config_;
    RecursionConfig cfg_;
    std::shared_ptr<const EuropeanPricer> pricer_;
    PhiCurve phi_;
    std::deque<NormalizedCurve> curves_;
    std::vector<StepDiagnostics> diagnostics_;
};

/// One-period European pricer for the model: closed form for Black-Scholes,
/// FFT curve for variance-Gamma.
std::shared_ptr<const EuropeanPricer> make_pricer(const ModelParams& model, double rate, double tau,
                                                  const FFTConfig& fft = {});

double price(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
             const RecursionConfig& cfg);
double seasoned_price(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
                      std::span<const double> fixings, const RecursionConfig& cfg);
double delta(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
             const RecursionConfig& cfg);

/// E[g(S_tau)] = g(e^{r tau} S) + e^{r tau} * int g''(K) phi(S, K) dK, by
/// Simpson's rule on `strikes` (defaults to the Black-Scholes integration
/// grid scaled by spot).
double expect_via_options(const std::function<double(double)>& g_second_deriv, double g_at_forward,
                          const EuropeanPricer& pricer, const Market& market,
                          std::optional<UniformGrid> strikes = std::nullopt);

} // namespace asianrec
