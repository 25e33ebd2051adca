#include "asianrec/asian_recursion.hpp"

#include "asianrec/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace asianrec {

RecursionConfig RecursionConfig::defaults_for(const ModelParams& model) {
    RecursionConfig cfg;
    cfg.grid = GridSpec::default_for(model);
    return cfg;
}

// ---------------------------------------------------------------------------
// CurveEvaluator

CurveEvaluator::CurveEvaluator(const NormalizedCurve& curve, double rate, double tau, Interpolation kind,
                               bool extrapolate)
    : curve_(&curve), rate_(rate), tau_(tau), extrapolate_(extrapolate),
      values_(curve.w_grid, curve.values, kind),
      first_(curve.w_grid, first_differences(curve.values, curve.w_grid.step), kind) {
    if (curve.second_derivs.size() == curve.values.size()) {
        second_ = UniformInterpolant(curve.w_grid, curve.second_derivs, kind);
    }
}

bool CurveEvaluator::inside(double w) const {
    if (curve_->w_grid.contains(w)) {
        return true;
    }
    if (!extrapolate_) {
        throw PricingError(ErrorCode::OutOfCoverage,
                           "w = " + std::to_string(w) + " outside the curve grid and extrapolation is off");
    }
    return false;
}

double CurveEvaluator::value(double w) const {
    if (inside(w)) {
        return values_(w);
    }
    return w < curve_->w_grid.front() ? sure_exercise_value(curve_->ell, w, rate_, tau_) : 0.0;
}

double CurveEvaluator::first_derivative(double w) const {
    if (inside(w)) {
        return first_(w);
    }
    return w < curve_->w_grid.front() ? -std::exp(-rate_ * curve_->ell * tau_) : 0.0;
}

double CurveEvaluator::second_derivative(double w) const {
    if (second_.values().empty()) {
        throw PricingError(ErrorCode::GridTooCoarse, "curve has no second derivatives");
    }
    return inside(w) ? second_(w) : 0.0;
}

// ---------------------------------------------------------------------------
// curve construction

NormalizedCurve base_curve(const EuropeanPricer& pricer, const GridSpec& grid) {
    NormalizedCurve curve;
    curve.ell = 1;
    curve.w_grid = grid.w_grid();
    curve.values.resize(curve.w_grid.size);
    for (std::size_t j = 0; j < curve.w_grid.size; ++j) {
        const double w = curve.w_grid[j];
        const double lower = std::max(0.0, sure_exercise_value(1, w, pricer.rate(), pricer.tau()));
        curve.values[j] = std::clamp(pricer.call(1.0, w), lower, 1.0);
    }
    return curve;
}

PhiCurve make_phi_curve(const EuropeanPricer& pricer, const GridSpec& grid) {
    PhiCurve phi;
    phi.k_grid = grid.k_grid();
    phi.phi_values.resize(phi.k_grid.size);
    for (std::size_t i = 0; i < phi.k_grid.size; ++i) {
        phi.phi_values[i] = pricer.phi(1.0, phi.k_grid[i]);
    }
    return phi;
}

double second_derivative(NormalizedCurve& curve, bool clamp) {
    if (curve.values.size() < 5) {
        throw PricingError(ErrorCode::GridTooCoarse, "second derivative needs at least 5 grid points");
    }
    curve.second_derivs = second_differences(curve.values, curve.w_grid.step);
    double clamped = 0.0;
    if (clamp) {
        for (double& d : curve.second_derivs) {
            if (d < 0.0) {
                clamped -= d;
                d = 0.0;
            }
        }
        clamped *= curve.w_grid.step;
    }
    return clamped;
}

NormalizedCurve recursion_step(const NormalizedCurve& prev, const PhiCurve& phi, double rate, double tau,
                               const RecursionConfig& cfg, StepDiagnostics* diagnostics) {
    if (prev.ell < 1 || prev.second_derivs.size() != prev.values.size()) {
        throw PricingError(ErrorCode::GridTooCoarse, "previous curve needs second derivatives");
    }
    const int ell = prev.ell + 1;
    const double l = ell;
    const double lm1 = ell - 1;
    const CurveEvaluator prev_eval(prev, rate, tau, cfg.interpolation, cfg.extrapolate);

    const UniformGrid& kg = phi.k_grid;
    const std::size_t nk = kg.size;
    const auto weights = simpson_weights(nk, kg.step);
    std::vector<double> coef(nk);
    std::vector<double> inv_k(nk);
    for (std::size_t i = 0; i < nk; ++i) {
        const double K = kg[i];
        inv_k[i] = 1.0 / K;
        coef[i] = weights[i] * phi.phi_values[i] * inv_k[i] * inv_k[i] * inv_k[i];
    }

    const UniformInterpolant phi_at(kg, phi.phi_values, Interpolation::Linear);

    const double growth = std::exp(rate * tau);
    const double b = 1.0 / lm1;
    const double lo = prev.w_grid.front();
    const double hi = prev.w_grid.back();

    // no-arbitrage band: max(0, A - w e^{-r l tau}) <= value <= A
    const double upper = discounted_average_forward(ell, rate, tau);
    auto lower_bound = [&](double w) { return std::max(0.0, sure_exercise_value(ell, w, rate, tau)); };

    NormalizedCurve next;
    next.ell = ell;
    next.w_grid = prev.w_grid;
    next.values.resize(prev.values.size());

    parallel_for(next.values.size(), cfg.workers, [&](std::size_t j) {
        const double w = next.w_grid[j];
        const double a = w * l / lm1;
        const double first = (lm1 / l) * prev_eval.value((w * l - growth) / (growth * lm1));

        // A''(a/K - b) vanishes unless lo <= a/K - b <= hi
        std::size_t i_begin = 0;
        std::size_t i_end = nk;
        if (cfg.extrapolate) {
            const double k_lo = a / (hi + b);
            const double k_hi = a / (lo + b);
            const double f_lo = std::floor((k_lo - kg.start) / kg.step) - 1.0;
            const double f_hi = std::ceil((k_hi - kg.start) / kg.step) + 2.0;
            i_begin = static_cast<std::size_t>(std::clamp(f_lo, 0.0, static_cast<double>(nk)));
            i_end = static_cast<std::size_t>(std::clamp(f_hi, 0.0, static_cast<double>(nk)));
        }
        double sum = 0.0;
        if (cfg.quadrature == Quadrature::Measure) {
            // u = a/K - b: int K^-3 A''(u) phi(K) dK = a^-2 int (u + b) phi(a / (u + b)) dA'(u)
            for (std::size_t m = 1; m + 1 < prev.values.size(); ++m) {
                const double u = prev.w_grid[m];
                const double K = a / (u + b);
                if (K >= kg.front() && K <= kg.back()) {
                    sum += (u + b) * phi_at(K) * prev.second_derivs[m];
                }
            }
            sum *= prev.w_grid.step / (a * a);
        } else {
            for (std::size_t i = i_begin; i < i_end; ++i) {
                sum += coef[i] * prev_eval.second_derivative(a * inv_k[i] - b);
            }
        }
        next.values[j] = std::clamp(first + w * w * l / lm1 * sum, lower_bound(w), upper);
    });
    const double repaired = cfg.convex_repair ? convex_minorant(next.values) : 0.0;

    if (diagnostics != nullptr) {
        const double max_d2 = *std::max_element(prev.second_derivs.begin(), prev.second_derivs.end());
        const double kmin = kg.front();
        const double kmax = kg.back();
        diagnostics->ell = ell;
        diagnostics->convex_repair = repaired;
        diagnostics->truncation_estimate =
            hi * hi * l / lm1 * max_d2 *
            (phi.phi_values.front() * kmin / (kmin * kmin * kmin) + phi.phi_values.back() * kmax / (kmax * kmax * kmax));
    }
    return next;
}

// ---------------------------------------------------------------------------
// engine

std::shared_ptr<const EuropeanPricer> make_pricer(const ModelParams& model, double rate, double tau,
                                                  const FFTConfig& fft) {
    if (const auto* bs = std::get_if<BlackScholesParams>(&model)) {
        return std::make_shared<const BlackScholesPricer>(bs->sigma, rate, tau);
    }
    const auto& vg = std::get<VarianceGammaParams>(model);
    return curve_to_pricer(fft_call_curve(fft, vg, rate, tau));
}

AsianRecursion::AsianRecursion(const ModelParams& model, const Market& market, const Schedule& schedule,
                               RecursionConfig cfg)
    : config_(validate(model, market, schedule, cfg.grid)), cfg_(std::move(cfg)) {
    cfg_.grid = config_.grid;
    pricer_ = make_pricer(config_.model, market.rate, schedule.tau, cfg_.fft);
    phi_ = make_phi_curve(*pricer_, cfg_.grid);
    const double kmin = phi_.k_grid.front();
    const double edge = phi_.phi_values.front() / (kmin * kmin * kmin);
    if (edge > 1e-6) {
        spdlog::warn("phi(1, k_min)/k_min^3 = {:.3e}: integration grid truncates a non-negligible tail", edge);
    }
    NormalizedCurve base = base_curve(*pricer_, cfg_.grid);
    const double repaired = cfg_.convex_repair ? convex_minorant(base.values) : 0.0;
    const double clamped = second_derivative(base, cfg_.clamp_negative_second_deriv);
    diagnostics_.push_back(StepDiagnostics{1, clamped, 0.0, repaired});
    curves_.push_back(std::move(base));
}

const NormalizedCurve& AsianRecursion::curve(int ell) {
    if (ell < 1) {
        throw PricingError(ErrorCode::DomainError, "observation count must be at least 1");
    }
    while (static_cast<int>(curves_.size()) < ell) {
        StepDiagnostics diag;
        NormalizedCurve next = recursion_step(curves_.back(), phi_, config_.market.rate, config_.schedule.tau, cfg_, &diag);
        diag.clamped_mass = second_derivative(next, cfg_.clamp_negative_second_deriv);
        if (diag.clamped_mass > 0.0) {
            spdlog::debug("recursion step {}: clamped negative second-derivative mass {:.3e}", next.ell,
                          diag.clamped_mass);
        }
        diagnostics_.push_back(diag);
        curves_.push_back(std::move(next));
    }
    return curves_[static_cast<std::size_t>(ell) - 1];
}

CurveEvaluator AsianRecursion::evaluator(int ell) {
    return CurveEvaluator(curve(ell), config_.market.rate, config_.schedule.tau, cfg_.interpolation, cfg_.extrapolate);
}

double AsianRecursion::curve_value(int ell, double w, double strike) {
    const double r = config_.market.rate;
    const double tau = config_.schedule.tau;
    if (w <= 0.0) {
        return sure_exercise_value(ell, w, r, tau);
    }
    const UniformGrid wg = cfg_.grid.w_grid();
    if (w < wg.front() - wg.step || w > wg.back() + wg.step) {
        throw PricingError(ErrorCode::StrikeOutOfGrid, "strike " + std::to_string(strike) +
                                                           " maps outside the normalized strike grid");
    }
    if (ell == 1) {
        return pricer_->call(1.0, w);
    }
    return evaluator(ell).value(w);
}

double AsianRecursion::price(double strike) {
    if (!(strike > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "strike must be positive");
    }
    const double spot = config_.market.spot;
    return spot * curve_value(config_.schedule.n_obs, strike / spot, strike);
}

double AsianRecursion::delta(double strike) {
    if (!(strike > 0.0)) {
        throw PricingError(ErrorCode::DomainError, "strike must be positive");
    }
    const int n = config_.schedule.n_obs;
    const double w = strike / config_.market.spot;
    const double value = curve_value(n, w, strike);
    double slope = 0.0;
    if (n == 1) {
        const double h = 1e-5 * std::max(w, 1e-3);
        slope = (pricer_->call(1.0, w + h) - pricer_->call(1.0, std::max(w - h, 0.0))) / (w + h - std::max(w - h, 0.0));
    } else {
        slope = evaluator(n).first_derivative(w);
    }
    return value - w * slope;
}

double AsianRecursion::seasoned_price(double strike, std::span<const double> fixings) {
    const int total = config_.schedule.n_obs;
    const int observed = static_cast<int>(fixings.size());
    if (observed >= total) {
        throw PricingError(ErrorCode::BadFixings, "at most n_obs - 1 fixings may be supplied");
    }
    double sum = 0.0;
    for (double s : fixings) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw PricingError(ErrorCode::BadFixings, "fixings must be positive");
        }
        sum += s;
    }
    const int remaining = total - observed;
    const double effective_strike = (total * strike - sum) / remaining;
    const double spot = config_.market.spot;
    const double scale = static_cast<double>(remaining) / total;
    return scale * spot * curve_value(remaining, effective_strike / spot, effective_strike);
}

double price(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
             const RecursionConfig& cfg) {
    return AsianRecursion(model, market, schedule, cfg).price(strike);
}

double seasoned_price(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
                      std::span<const double> fixings, const RecursionConfig& cfg) {
    return AsianRecursion(model, market, schedule, cfg).seasoned_price(strike, fixings);
}

double delta(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
             const RecursionConfig& cfg) {
    return AsianRecursion(model, market, schedule, cfg).delta(strike);
}

double expect_via_options(const std::function<double(double)>& g_second_deriv, double g_at_forward,
                          const EuropeanPricer& pricer, const Market& market, std::optional<UniformGrid> strikes) {
    UniformGrid grid;
    if (strikes) {
        grid = *strikes;
    } else {
        const UniformGrid unit = GridSpec::black_scholes_default().k_grid();
        grid = UniformGrid{unit.start * market.spot, unit.step * market.spot, unit.size};
    }
    std::vector<double> integrand(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double K = grid[i];
        integrand[i] = g_second_deriv(K) * pricer.phi(market.spot, K);
    }
    return g_at_forward + std::exp(pricer.rate() * pricer.tau()) * simpson(integrand, grid.step);
}

} // namespace asianrec
