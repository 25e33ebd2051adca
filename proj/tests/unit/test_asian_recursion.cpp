#include "asianrec/asian_recursion.hpp"
#include "asianrec/errors.hpp"
#include "asianrec/montecarlo.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace asianrec;

namespace {

constexpr double kRate = 0.05;
constexpr double kDay = 1.0 / 365.0;
const Market kMarket{100.0, kRate};

RecursionConfig bs_config() { return RecursionConfig::defaults_for(BlackScholesParams{0.2}); }

} // namespace

TEST(BaseCurve, SamplesTheUnitSpotCall) {
    const BlackScholesPricer pricer(0.2, kRate, kDay);
    const auto grid = GridSpec::black_scholes_default();
    const auto curve = base_curve(pricer, grid);
    EXPECT_EQ(curve.ell, 1);
    ASSERT_EQ(curve.values.size(), grid.w_grid().size);
    for (std::size_t i = 0; i < curve.values.size(); i += 37) {
        const double ref = oracle::bs_call(1.0, curve.w_grid[i], kRate, 0.2, kDay);
        EXPECT_NEAR(curve.values[i], ref, 1e-12 * ref + 1e-15);
    }
    EXPECT_NEAR(curve.values.front(), 1.0 - 0.0025 * std::exp(-kRate * kDay), 1e-15);
    EXPECT_LT(curve.values.back(), 1e-300);
}

namespace {

double strike_density(double w, double tau) {
    const double sd = 0.2 * std::sqrt(tau);
    const double d2 = (std::log(1.0 / w) + (kRate - 0.02) * tau) / sd;
    return std::exp(-kRate * tau) * oracle::norm_pdf(d2) / (w * sd);
}

} // namespace

TEST(BaseCurve, SecondDerivativeMatchesTheStrikeDensityNearTheMoney) {
    const double tau = 90.0 * kDay;
    const BlackScholesPricer pricer(0.2, kRate, tau);
    auto curve = base_curve(pricer, GridSpec::black_scholes_default());
    EXPECT_LT(second_derivative(curve, true), 1e-10);
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        const double w = curve.w_grid[i];
        if (w < 0.86 || w > 1.18) {
            continue;
        }
        const double exact = strike_density(w, tau);
        EXPECT_NEAR(curve.second_derivs[i], exact, 1e-4 * exact) << w;
    }
}

TEST(BaseCurve, SecondDerivativeErrorIsTheDifferenceTruncation) {
    // central differences err by h^2 f''''/12; f'''' from the exact density
    const double h = GridSpec::black_scholes_default().w_step;
    for (double tau : {kDay, 90.0 * kDay}) {
        const BlackScholesPricer pricer(0.2, kRate, tau);
        auto curve = base_curve(pricer, GridSpec::black_scholes_default());
        second_derivative(curve, false);
        for (std::size_t i = 1; i + 1 < curve.values.size(); ++i) {
            const double w = curve.w_grid[i];
            if (w < 0.5 || w > 1.5) {
                continue;
            }
            const double e = 1e-4;
            const double f4 = (strike_density(w + e, tau) - 2.0 * strike_density(w, tau) + strike_density(w - e, tau)) /
                              (e * e);
            const double bound = 1.5 * h * h * std::abs(f4) / 12.0 + 1e-9 + 2e-4 * strike_density(w, tau);
            EXPECT_NEAR(curve.second_derivs[i], strike_density(w, tau), bound) << w << " " << tau;
        }
    }
}

TEST(SecondDerivative, ClampReportsNegativeMass) {
    NormalizedCurve c;
    c.w_grid = UniformGrid{0.0, 0.1, 6};
    c.values = {1.0, 0.8, 0.7, 0.7, 0.5, 0.4};
    auto unclamped = c;
    EXPECT_EQ(second_derivative(unclamped, false), 0.0);
    EXPECT_LT(*std::min_element(unclamped.second_derivs.begin(), unclamped.second_derivs.end()), 0.0);
    EXPECT_GT(second_derivative(c, true), 0.0);
    for (double d : c.second_derivs) {
        EXPECT_GE(d, 0.0);
    }
}

TEST(Recursion, SingleObservationIsTheEuropeanCall) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{1, kDay}, bs_config());
    for (int i = 0; i < 20; ++i) {
        const double K = 80.0 + 2.0 * i;
        EXPECT_NEAR(engine.price(K), oracle::bs_call(100.0, K, kRate, 0.2, kDay), 1e-6) << K;
    }
}

TEST(Recursion, TwoFixingsMatchTheDirectIntegral) {
    // compared at unit spot, where the curves live
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{2, kDay}, bs_config());
    for (double E : {96.0, 99.0, 100.0, 100.5, 102.0}) {
        EXPECT_NEAR(engine.price(E) / 100.0, oracle::two_fixing_asian(1.0, E / 100.0, kRate, 0.2, kDay), 1e-4) << E;
    }
}

TEST(Recursion, DeterministicPathIsTheDiscountedAverage) {
    const int n = 20;
    AsianRecursion engine(BlackScholesParams{1e-9}, kMarket, Schedule{n, kDay}, bs_config());
    const double avg = discounted_average_forward(n, kRate, kDay);
    for (double E : {80.0, 95.0, 99.5}) {
        const double exact = 100.0 * avg - E * std::exp(-kRate * n * kDay);
        EXPECT_NEAR(engine.price(E), exact, 1e-9 * exact) << E;
    }
    EXPECT_NEAR(engine.price(110.0), 0.0, 1e-12);
}

TEST(Recursion, CurvesRespectBoundsMonotonicityAndConvexity) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{90, kDay}, bs_config());
    for (int ell = 1; ell <= 90; ++ell) {
        const auto& curve = engine.curve(ell);
        const double upper = discounted_average_forward(ell, kRate, kDay);
        const double df = std::exp(-kRate * ell * kDay);
        for (std::size_t i = 0; i < curve.values.size(); ++i) {
            const double v = curve.values[i];
            EXPECT_LE(v, upper + 1e-14);
            EXPECT_GE(v, std::max(0.0, upper - curve.w_grid[i] * df) - 1e-12);
            if (i > 0) {
                EXPECT_LE(v, curve.values[i - 1] + 1e-15);
            }
            if (i > 0 && i + 1 < curve.values.size()) {
                EXPECT_GE(curve.values[i + 1] - 2.0 * v + curve.values[i - 1], -1e-13);
            }
        }
    }
    ASSERT_EQ(engine.diagnostics().size(), 90u);
    for (int ell = 1; ell <= 90; ++ell) {
        const auto& d = engine.diagnostics()[ell - 1];
        EXPECT_EQ(d.ell, ell);
        EXPECT_GE(d.clamped_mass, 0.0);
        EXPECT_LE(d.convex_repair, 1e-10);
    }
}

TEST(Recursion, VarianceGammaCurvesRespectBounds) {
    const VarianceGammaParams vg{0.3, 0.3, -0.1};
    AsianRecursion engine(vg, kMarket, Schedule{10, kDay}, RecursionConfig::defaults_for(vg));
    for (int ell = 1; ell <= 10; ++ell) {
        const auto& curve = engine.curve(ell);
        const double upper = discounted_average_forward(ell, kRate, kDay);
        const double df = std::exp(-kRate * ell * kDay);
        for (std::size_t i = 0; i < curve.values.size(); ++i) {
            EXPECT_LE(curve.values[i], upper + 1e-12);
            EXPECT_GE(curve.values[i], std::max(0.0, upper - curve.w_grid[i] * df) - 1e-9);
            if (i > 0) {
                EXPECT_LE(curve.values[i], curve.values[i - 1] + 1e-15);
            }
        }
    }
    AsianRecursion one(vg, kMarket, Schedule{1, kDay}, RecursionConfig::defaults_for(vg));
    for (double K : {90.0, 100.0, 110.0}) {
        EXPECT_NEAR(one.price(K), one.pricer().call(100.0, K), 1e-12);
    }
}

TEST(Recursion, DeltaLimitsAndFiniteDifference) {
    const int n = 30;
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{n, kDay}, bs_config());
    EXPECT_NEAR(engine.delta(50.0), discounted_average_forward(n, kRate, kDay), 1e-9);
    EXPECT_NEAR(engine.delta(150.0), 0.0, 1e-12);
    const double h = 1e-4 * 100.0;
    AsianRecursion up(BlackScholesParams{0.2}, Market{100.0 + h, kRate}, Schedule{n, kDay}, bs_config());
    AsianRecursion down(BlackScholesParams{0.2}, Market{100.0 - h, kRate}, Schedule{n, kDay}, bs_config());
    for (double E = 80.0; E <= 120.0; E += 5.0) {
        EXPECT_NEAR(engine.delta(E), (up.price(E) - down.price(E)) / (2.0 * h), 1e-3) << E;
    }
}

TEST(Seasoned, NoFixingsIsThePlainPrice) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{5, kDay}, bs_config());
    EXPECT_DOUBLE_EQ(engine.seasoned_price(101.0, {}), engine.price(101.0));
}

TEST(Seasoned, OneRemainingFixingIsAScaledCall) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{2, kDay}, bs_config());
    const std::vector<double> fixings{98.0};
    const double E = 100.0;
    EXPECT_NEAR(engine.seasoned_price(E, fixings), 0.5 * oracle::bs_call(100.0, 2.0 * E - 98.0, kRate, 0.2, kDay),
                1e-12);
}

TEST(Seasoned, NegativeEffectiveStrikeIsLinear) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{5, kDay}, bs_config());
    const std::vector<double> fixings{200.0, 200.0, 200.0, 200.0};
    const double expected = 100.0 / 5.0 + std::exp(-kRate * kDay) * (800.0 / 5.0 - 100.0);
    EXPECT_NEAR(engine.seasoned_price(100.0, fixings), expected, 1e-12);
}

TEST(Seasoned, RejectsBadFixings) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{3, kDay}, bs_config());
    const std::vector<double> too_many{100.0, 100.0, 100.0};
    const std::vector<double> negative{-1.0};
    EXPECT_THROW(engine.seasoned_price(100.0, too_many), PricingError);
    EXPECT_THROW(engine.seasoned_price(100.0, negative), PricingError);
}

TEST(Recursion, CurveReferencesSurviveLaterSteps) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{12, kDay}, bs_config());
    const NormalizedCurve& first = engine.curve(1);
    const double* data = first.values.data();
    engine.curve(12);
    EXPECT_EQ(&engine.curve(1), &first);
    EXPECT_EQ(first.values.data(), data);
    EXPECT_EQ(first.ell, 1);
}

TEST(Recursion, StrikeOutsideTheGrid) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{3, kDay}, bs_config());
    try {
        engine.price(1000.0);
        FAIL() << "expected StrikeOutOfGrid";
    } catch (const PricingError& e) {
        EXPECT_EQ(e.code(), ErrorCode::StrikeOutOfGrid);
    }
}

TEST(CurveEvaluator, ExtrapolationSwitch) {
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{3, kDay}, bs_config());
    const auto& curve = engine.curve(3);
    const CurveEvaluator open(curve, kRate, kDay, Interpolation::MonotoneCubic, true);
    EXPECT_EQ(open.value(5.0), 0.0);
    EXPECT_NEAR(open.value(-0.5), sure_exercise_value(3, -0.5, kRate, kDay), 1e-15);
    const CurveEvaluator closed(curve, kRate, kDay, Interpolation::MonotoneCubic, false);
    try {
        closed.value(5.0);
        FAIL() << "expected OutOfCoverage";
    } catch (const PricingError& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfCoverage);
    }
    EXPECT_NEAR(closed.value(curve.w_grid[100]), curve.values[100], 1e-15);
}

TEST(ExpectViaOptions, MomentsOfTheOnePeriodPrice) {
    const BlackScholesPricer pricer(0.2, kRate, kDay);
    const double fwd = 100.0 * std::exp(kRate * kDay);
    const double second_moment = 1e4 * std::exp((2.0 * kRate + 0.04) * kDay);
    const double x2 = expect_via_options([](double) { return 2.0; }, fwd * fwd, pricer, kMarket);
    EXPECT_NEAR(x2, second_moment, 1e-4 * second_moment);
    const double x1 = expect_via_options([](double) { return 0.0; }, fwd, pricer, kMarket);
    EXPECT_NEAR(x1, fwd, 1e-10);
}

TEST(MeasureQuadrature, TwoFixingsMatchTheDirectIntegral) {
    auto cfg = bs_config();
    cfg.quadrature = Quadrature::Measure;
    AsianRecursion engine(BlackScholesParams{0.2}, kMarket, Schedule{2, kDay}, cfg);
    for (double E : {96.0, 99.0, 100.0, 100.5, 102.0}) {
        EXPECT_NEAR(engine.price(E) / 100.0, oracle::two_fixing_asian(1.0, E / 100.0, kRate, 0.2, kDay), 1e-4) << E;
    }
}

TEST(MeasureQuadrature, AgreesWithSimpsonOnSmoothCurves) {
    auto cfg = bs_config();
    AsianRecursion simpson(BlackScholesParams{0.2}, kMarket, Schedule{90, kDay}, cfg);
    cfg.quadrature = Quadrature::Measure;
    AsianRecursion measure(BlackScholesParams{0.2}, kMarket, Schedule{90, kDay}, cfg);
    for (double E : {80.0, 95.0, 100.0, 105.0, 120.0}) {
        EXPECT_NEAR(measure.price(E), simpson.price(E), 0.01) << E;
    }
}

TEST(MeasureQuadrature, DeterministicPathIsTheDiscountedAverage) {
    auto cfg = bs_config();
    cfg.quadrature = Quadrature::Measure;
    const int n = 20;
    AsianRecursion engine(BlackScholesParams{1e-9}, kMarket, Schedule{n, kDay}, cfg);
    const double exact = 100.0 * discounted_average_forward(n, kRate, kDay) - 95.0 * std::exp(-kRate * n * kDay);
    EXPECT_NEAR(engine.price(95.0), exact, 1e-9 * exact);
}

// One-day VG increments put most of their mass on a near-atom, so the
// one-period call has a kink that Simpson's rule on the strike grid misses.
TEST(MeasureQuadrature, VarianceGammaAtTheMoneyMatchesSimulation) {
    const VarianceGammaParams vg{0.3, 0.3, -0.1};
    auto cfg = RecursionConfig::defaults_for(vg);
    cfg.quadrature = Quadrature::Measure;
    cfg.fft = FFTConfig{std::size_t{1} << 17, 20000.0, 1.5};
    cfg.grid.w_min = cfg.grid.w_step = 0.0005;
    cfg.grid.k_step = 0.0005;
    SimConfig sim;
    sim.n_paths = 400000;
    sim.workers = 4;
    for (int n : {2, 5}) {
        AsianRecursion engine(vg, kMarket, Schedule{n, kDay}, cfg);
        const auto mc = mc_asian_price(vg, kMarket, Schedule{n, kDay}, 100.0, sim);
        EXPECT_NEAR(engine.price(100.0), mc.estimate, 3.0 * mc.std_error) << n;
    }
}
