#include "asianrec/montecarlo.hpp"

#include "asianrec/errors.hpp"
#include "asianrec/levy_fft.hpp"
#include "asianrec/random.hpp"

#include <algorithm>
#include <cmath>

namespace asianrec {

namespace {

// Fixed chunking keeps the summation order independent of the worker count.
constexpr std::int64_t kChunkPaths = 4096;

struct RunningStats {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) noexcept {
        if (o.count == 0.0) {
            return;
        }
        const double total = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }

    double std_error() const noexcept { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

class PathSimulator {
public:
    PathSimulator(const ModelParams& model, const Market& market, int steps, double dt, const SimConfig& sim)
        : spot_(market.spot), steps_(steps), seed_(sim.seed), antithetic_(sim.antithetic) {
        if (const auto* bs = std::get_if<BlackScholesParams>(&model)) {
            if (!(bs->sigma >= 0.0)) {
                throw PricingError(ErrorCode::NonPositiveSigma, "volatility must be nonnegative");
            }
            drift_ = (market.rate - 0.5 * bs->sigma * bs->sigma) * dt;
            diffusion_ = bs->sigma * std::sqrt(dt);
        } else {
            const auto& vg = std::get<VarianceGammaParams>(model);
            validate_model(vg);
            vg_ = true;
            theta_ = vg.theta;
            sigma_ = vg.sigma;
            gamma_shape_ = dt / vg.nu;
            gamma_scale_ = vg.nu;
            drift_ = (market.rate + vg_omega(vg.sigma, vg.nu, vg.theta)) * dt;
        }
    }

    void generate(std::int64_t path, std::span<double> out) const {
        const auto stream = static_cast<std::uint64_t>(antithetic_ ? path / 2 : path);
        const double sign = (antithetic_ && path % 2 == 1) ? -1.0 : 1.0;
        PathRandom rng(seed_, stream);
        double log_s = std::log(spot_);
        for (int i = 0; i < steps_; ++i) {
            if (vg_) {
                const double g = rng.gamma(gamma_shape_, gamma_scale_);
                const double z = sign * rng.normal();
                log_s += drift_ + theta_ * g + sigma_ * std::sqrt(g) * z;
            } else {
                log_s += drift_ + diffusion_ * sign * rng.normal();
            }
            out[static_cast<std::size_t>(i)] = std::exp(log_s);
        }
    }

    int steps() const noexcept { return steps_; }

private:
    double spot_;
    int steps_;
    std::uint64_t seed_;
    bool antithetic_;
    bool vg_ = false;
    double drift_ = 0.0;
    double diffusion_ = 0.0;
    double theta_ = 0.0;
    double sigma_ = 0.0;
    double gamma_shape_ = 0.0;
    double gamma_scale_ = 0.0;
};

/// Discounted call payoffs (statistic(path) - K)^+ for every strike.
template <class Statistic>
std::vector<MCResult> run(const PathSimulator& simulator, std::span<const double> strikes, double discount,
                          const SimConfig& sim, const Statistic& statistic) {
    const std::size_t n_strikes = strikes.size();
    validate_sim(sim);
    const std::int64_t n_paths = sim.n_paths;
    const auto n_chunks = static_cast<std::size_t>((n_paths + kChunkPaths - 1) / kChunkPaths);
    std::vector<std::vector<RunningStats>> chunk_stats(n_chunks, std::vector<RunningStats>(n_strikes));

    parallel_for(n_chunks, sim.workers, [&](std::size_t c) {
        std::vector<double> fixings(static_cast<std::size_t>(simulator.steps()));
        std::vector<double> pending(n_strikes);
        auto& stats = chunk_stats[c];
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunkPaths;
        const std::int64_t end = std::min(n_paths, begin + kChunkPaths);
        for (std::int64_t p = begin; p < end; ++p) {
            simulator.generate(p, fixings);
            const double underlying = statistic(std::span<const double>(fixings));
            const bool first_of_pair = sim.antithetic && p % 2 == 0 && p + 1 < n_paths;
            const bool second_of_pair = sim.antithetic && p % 2 == 1;
            for (std::size_t s = 0; s < n_strikes; ++s) {
                const double value = discount * std::max(underlying - strikes[s], 0.0);
                if (first_of_pair) {
                    pending[s] = value;
                } else if (second_of_pair) {
                    stats[s].add(0.5 * (pending[s] + value));
                } else {
                    stats[s].add(value);
                }
            }
        }
    });

    std::vector<MCResult> results(n_strikes);
    for (std::size_t s = 0; s < n_strikes; ++s) {
        RunningStats total;
        for (const auto& chunk : chunk_stats) {
            total.merge(chunk[s]);
        }
        results[s] = MCResult{total.mean, total.std_error(), n_paths, sim.seed};
    }
    return results;
}

void check_inputs(const Market& market, const Schedule& schedule) {
    if (!(market.spot > 0.0)) {
        throw PricingError(ErrorCode::BadMarket, "spot must be positive");
    }
    if (schedule.n_obs < 1 || !(schedule.tau > 0.0)) {
        throw PricingError(ErrorCode::BadSchedule, "schedule needs n_obs >= 1 and tau > 0");
    }
}

void stream_paths(const ModelParams& model, const Market& market, const Schedule& schedule, const SimConfig& sim,
                  const FixingSink& sink) {
    validate_sim(sim);
    check_inputs(market, schedule);
    const PathSimulator simulator(model, market, schedule.n_obs, schedule.tau, sim);
    std::vector<double> fixings(static_cast<std::size_t>(schedule.n_obs));
    for (std::int64_t p = 0; p < sim.n_paths; ++p) {
        simulator.generate(p, fixings);
        sink(p, fixings);
    }
}

} // namespace

void validate_sim(const SimConfig& sim) {
    if (sim.n_paths < 1) {
        throw PricingError(ErrorCode::BadSimConfig, "n_paths must be at least 1");
    }
    if (sim.workers < 1) {
        throw PricingError(ErrorCode::BadSimConfig, "workers must be at least 1");
    }
}

void simulate_gbm_fixings(const Market& market, double sigma, const Schedule& schedule, const SimConfig& sim,
                          const FixingSink& sink) {
    stream_paths(BlackScholesParams{sigma}, market, schedule, sim, sink);
}

void simulate_vg_fixings(const Market& market, const VarianceGammaParams& vg, const Schedule& schedule,
                         const SimConfig& sim, const FixingSink& sink) {
    stream_paths(vg, market, schedule, sim, sink);
}

void simulate_fixings(const ModelParams& model, const Market& market, const Schedule& schedule,
                      const SimConfig& sim, const FixingSink& sink) {
    stream_paths(model, market, schedule, sim, sink);
}

std::vector<MCResult> mc_asian_prices(const ModelParams& model, const Market& market, const Schedule& schedule,
                                      std::span<const double> strikes, const SimConfig& sim) {
    check_inputs(market, schedule);
    const PathSimulator simulator(model, market, schedule.n_obs, schedule.tau, sim);
    const double discount = std::exp(-market.rate * schedule.maturity());
    const double inv_n = 1.0 / schedule.n_obs;
    return run(simulator, strikes, discount, sim, [inv_n](std::span<const double> fixings) {
        double sum = 0.0;
        for (double x : fixings) {
            sum += x;
        }
        return sum * inv_n;
    });
}

MCResult mc_asian_price(const ModelParams& model, const Market& market, const Schedule& schedule, double strike,
                        const SimConfig& sim) {
    return mc_asian_prices(model, market, schedule, std::span<const double>(&strike, 1), sim).front();
}

std::vector<MCResult> mc_european_prices(const ModelParams& model, const Market& market, double tau,
                                         std::span<const double> strikes, const SimConfig& sim) {
    const Schedule one_step{1, tau};
    check_inputs(market, one_step);
    const PathSimulator simulator(model, market, 1, tau, sim);
    const double discount = std::exp(-market.rate * tau);
    return run(simulator, strikes, discount, sim, [](std::span<const double> fixings) { return fixings[0]; });
}

MCResult mc_european_price(const ModelParams& model, const Market& market, double tau, double strike,
                           const SimConfig& sim) {
    return mc_european_prices(model, market, tau, std::span<const double>(&strike, 1), sim).front();
}

} // namespace asianrec
