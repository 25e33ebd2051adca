#include "asianrec/errors.hpp"
#include "asianrec/european.hpp"
#include "asianrec/levy_fft.hpp"
#include "asianrec/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace asianrec;

namespace {

constexpr double kRate = 0.05;
constexpr double kDay = 1.0 / 365.0;
const Market kMarket{100.0, kRate};
const VarianceGammaParams kVG{0.3, 0.3, -0.1};

struct Stats {
    double mean = 0.0;
    double var = 0.0;
    double se() const { return std::sqrt(var / n); }
    double n = 0.0;
};

Stats terminal_stats(const ModelParams& model, const Schedule& schedule, std::int64_t paths, bool log_scale,
                     std::uint64_t seed = 99) {
    double sum = 0.0;
    double sum2 = 0.0;
    SimConfig sim;
    sim.n_paths = paths;
    sim.seed = seed;
    simulate_fixings(model, kMarket, schedule, sim, [&](std::int64_t, std::span<const double> fixings) {
        const double x = log_scale ? std::log(fixings.back() / kMarket.spot) : fixings.back();
        sum += x;
        sum2 += x * x;
    });
    const double n = static_cast<double>(paths);
    const double mean = sum / n;
    return {mean, (sum2 - n * mean * mean) / (n - 1.0), n};
}

} // namespace

TEST(Simulation, ZeroVolatilityPathsAreDeterministic) {
    SimConfig sim;
    sim.n_paths = 100;
    simulate_gbm_fixings(kMarket, 0.0, Schedule{5, kDay}, sim, [&](std::int64_t, std::span<const double> f) {
        ASSERT_EQ(f.size(), 5u);
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_NEAR(f[i], 100.0 * std::exp(kRate * static_cast<double>(i + 1) * kDay), 1e-12);
        }
    });
}

TEST(Simulation, PathsArriveInIndexOrder) {
    SimConfig sim;
    sim.n_paths = 10000;
    sim.workers = 4;
    std::int64_t expected = 0;
    simulate_fixings(BlackScholesParams{0.2}, kMarket, Schedule{3, kDay}, sim,
                     [&](std::int64_t path, std::span<const double>) { EXPECT_EQ(path, expected++); });
    EXPECT_EQ(expected, 10000);
}

TEST(Simulation, GbmMartingaleAndLogVariance) {
    const Schedule schedule{90, kDay};
    const auto s = terminal_stats(BlackScholesParams{0.2}, schedule, 200000, false);
    EXPECT_NEAR(s.mean, 100.0 * std::exp(kRate * schedule.maturity()), 3.0 * s.se());
    const auto l = terminal_stats(BlackScholesParams{0.2}, Schedule{1, kDay}, 200000, true);
    const double var = 0.04 * kDay;
    // SE of a sample variance of normals: var sqrt(2/(n-1))
    EXPECT_NEAR(l.var, var, 3.0 * var * std::sqrt(2.0 / (l.n - 1.0)));
}

TEST(Simulation, VarianceGammaMartingale) {
    const Schedule schedule{90, kDay};
    const auto s = terminal_stats(kVG, schedule, 200000, false);
    EXPECT_NEAR(s.mean, 100.0 * std::exp(kRate * schedule.maturity()), 3.0 * s.se());
}

TEST(Simulation, VarianceGammaWithTinyNuIsGbm) {
    const Schedule schedule{10, kDay};
    const auto l = terminal_stats(VarianceGammaParams{0.2, 1e-6, 0.0}, schedule, 200000, true);
    const double T = schedule.maturity();
    const double var = 0.04 * T;
    EXPECT_NEAR(l.mean, (kRate - 0.02) * T, 3.0 * l.se());
    EXPECT_NEAR(l.var, var, 3.0 * var * std::sqrt(2.0 / (l.n - 1.0)));
}

TEST(Simulation, InadmissibleVarianceGammaIsRejected) {
    SimConfig sim;
    sim.n_paths = 10;
    EXPECT_THROW(simulate_vg_fixings(kMarket, VarianceGammaParams{0.3, 0.3, 5.0}, Schedule{2, kDay}, sim,
                                     [](std::int64_t, std::span<const double>) {}),
                 PricingError);
    sim.n_paths = 0;
    EXPECT_THROW(validate_sim(sim), PricingError);
}

TEST(AsianMC, ZeroVolatilityIsExactWithZeroError) {
    const int n = 20;
    SimConfig sim;
    sim.n_paths = 5000;
    const auto res = mc_asian_price(BlackScholesParams{0.0}, kMarket, Schedule{n, kDay}, 95.0, sim);
    double avg = 0.0;
    for (int i = 1; i <= n; ++i) {
        avg += 100.0 * std::exp(kRate * i * kDay);
    }
    avg /= n;
    const double exact = std::exp(-kRate * n * kDay) * (avg - 95.0);
    EXPECT_NEAR(res.estimate, exact, 1e-12 * exact);
    EXPECT_EQ(res.std_error, 0.0);
    EXPECT_EQ(res.n_paths, 5000);
    EXPECT_EQ(res.seed, sim.seed);
}

TEST(AsianMC, WorkerCountDoesNotChangeResults) {
    SimConfig sim;
    sim.n_paths = 50000;
    const std::vector<double> strikes{90.0, 100.0, 110.0};
    const auto one = mc_asian_prices(kVG, kMarket, Schedule{10, kDay}, strikes, sim);
    for (int workers : {2, 3, 8}) {
        sim.workers = workers;
        const auto many = mc_asian_prices(kVG, kMarket, Schedule{10, kDay}, strikes, sim);
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            EXPECT_EQ(one[i].estimate, many[i].estimate);
            EXPECT_EQ(one[i].std_error, many[i].std_error);
        }
    }
}

TEST(AsianMC, StandardErrorScalesWithPathCount) {
    SimConfig sim;
    sim.n_paths = 20000;
    const auto small = mc_asian_price(BlackScholesParams{0.2}, kMarket, Schedule{5, kDay}, 100.0, sim);
    sim.n_paths = 80000;
    const auto large = mc_asian_price(BlackScholesParams{0.2}, kMarket, Schedule{5, kDay}, 100.0, sim);
    EXPECT_NEAR(large.std_error / small.std_error, 0.5, 0.1);
}

TEST(AsianMC, AntitheticStaysUnbiased) {
    SimConfig sim;
    sim.n_paths = 100000;
    const auto plain = mc_asian_price(BlackScholesParams{0.2}, kMarket, Schedule{5, kDay}, 100.0, sim);
    sim.antithetic = true;
    const auto anti = mc_asian_price(BlackScholesParams{0.2}, kMarket, Schedule{5, kDay}, 100.0, sim);
    EXPECT_NEAR(anti.estimate, plain.estimate, 3.0 * std::hypot(anti.std_error, plain.std_error));
}

// Reduced path counts: the comparison is within 3 SE of our own estimate.
TEST(AsianMC, TableOneMonteCarloColumnAtTheMoney) {
    SimConfig sim;
    sim.n_paths = 200000;
    const auto res = mc_asian_price(BlackScholesParams{0.2}, kMarket, Schedule{90, kDay}, 100.0, sim);
    EXPECT_NEAR(res.estimate, 2.6082, 3.0 * res.std_error);
}

TEST(AsianMC, TableTwoMonteCarloColumnAtNinety) {
    SimConfig sim;
    sim.n_paths = 200000;
    const auto res = mc_asian_price(kVG, kMarket, Schedule{90, kDay}, 90.0, sim);
    EXPECT_NEAR(res.estimate, 11.0223, 3.0 * res.std_error);
}

TEST(EuropeanMC, BlackScholesMatchesClosedForm) {
    SimConfig sim;
    sim.n_paths = 200000;
    const double tau = 90.0 * kDay;
    const std::vector<double> strikes{0.0, 90.0, 100.0, 115.0};
    const auto res = mc_european_prices(BlackScholesParams{0.2}, kMarket, tau, strikes, sim);
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        EXPECT_NEAR(res[i].estimate, bs_call(100.0, strikes[i], kRate, 0.2, tau), 3.0 * res[i].std_error)
            << strikes[i];
    }
    // K = 0: the discounted terminal price, whose SE is its own sample SE
    EXPECT_NEAR(res[0].estimate, 100.0, 3.0 * res[0].std_error);
    EXPECT_GT(res[0].std_error, 0.0);
}

TEST(EuropeanMC, VarianceGammaMatchesFft) {
    SimConfig sim;
    sim.n_paths = 400000;
    const double tau = 90.0 * kDay;
    const auto pricer = curve_to_pricer(fft_call_curve(FFTConfig{}, kVG, kRate, tau));
    for (double K : {90.0, 100.0, 110.0}) {
        const auto res = mc_european_price(kVG, kMarket, tau, K, sim);
        EXPECT_NEAR(res.estimate, pricer->call(100.0, K), 3.0 * res.std_error) << K;
    }
}
