#include "asianrec/cli.hpp"

#include "asianrec/errors.hpp"
#include "asianrec/european.hpp"
#include "asianrec/levy_fft.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace asianrec::cli {

namespace {

using nlohmann::json;

std::string price4(double x) { return fmt::format("{:.4f}", x); }
std::string shortest(double x) { return fmt::format("{}", x); }

const std::vector<double>& require_strikes(const RunConfig& config) {
    if (config.strikes.empty()) {
        throw PricingError(ErrorCode::ConfigError, "no strikes given (use --strike, --strikes or run.strikes)");
    }
    return config.strikes;
}

json model_json(const ModelParams& model) {
    if (const auto* bs = std::get_if<BlackScholesParams>(&model)) {
        return json{{"type", "bs"}, {"sigma", bs->sigma}};
    }
    const auto& vg = std::get<VarianceGammaParams>(model);
    return json{{"type", "vg"}, {"sigma", vg.sigma}, {"nu", vg.nu}, {"theta", vg.theta}};
}

json header_json(const std::string& command, const RunConfig& config, const Schedule& schedule) {
    return json{{"command", command},
                {"model", model_json(config.model)},
                {"spot", config.market.spot},
                {"rate", config.market.rate},
                {"n_obs", schedule.n_obs},
                {"tau", schedule.tau}};
}

void write_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

} // namespace

void cmd_price(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    const auto& strikes = require_strikes(config);
    if (strikes.size() != 1) {
        throw PricingError(ErrorCode::ConfigError, "price takes exactly one strike; use table for several");
    }
    const Schedule schedule = config.schedule();
    AsianRecursion engine(config.model, config.market, schedule, config.recursion());
    const double strike = strikes.front();
    const double value = engine.price(strike);
    const double delta = options.delta ? engine.delta(strike) : 0.0;

    if (config.output == OutputFormat::Json) {
        json doc = header_json("price", config, schedule);
        doc["strike"] = strike;
        doc["price"] = value;
        if (options.delta) {
            doc["delta"] = delta;
        }
        write_json(out, doc);
        return;
    }
    out << price4(value);
    if (options.delta) {
        out << ',' << price4(delta);
    }
    out << '\n';
}

void cmd_table(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    const auto& strikes = require_strikes(config);
    const Schedule schedule = config.schedule();
    AsianRecursion engine(config.model, config.market, schedule, config.recursion());
    std::vector<double> prices;
    std::vector<double> deltas;
    for (double strike : strikes) {
        prices.push_back(engine.price(strike));
        deltas.push_back(engine.delta(strike));
    }
    std::vector<MCResult> mc;
    if (options.with_mc) {
        mc = mc_asian_prices(config.model, config.market, schedule, strikes, config.sim());
    }

    if (config.output == OutputFormat::Json) {
        json doc = header_json("table", config, schedule);
        json rows = json::array();
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            json row{{"strike", strikes[i]}, {"price", prices[i]}, {"delta", deltas[i]}};
            if (options.with_mc) {
                row["mc_price"] = mc[i].estimate;
                row["mc_se"] = mc[i].std_error;
            }
            rows.push_back(row);
        }
        doc["rows"] = rows;
        if (options.with_mc) {
            doc["mc"] = json{{"paths", config.mc_paths}, {"seed", config.mc_seed}, {"antithetic", config.mc_antithetic}};
        }
        write_json(out, doc);
        return;
    }
    out << "strike,price,delta,mc_price,mc_se\n";
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        out << shortest(strikes[i]) << ',' << price4(prices[i]) << ',' << price4(deltas[i]) << ',';
        if (options.with_mc) {
            out << price4(mc[i].estimate) << ',' << fmt::format("{:.6f}", mc[i].std_error);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

void cmd_mc(const RunConfig& config, std::ostream& out) {
    const auto& strikes = require_strikes(config);
    const Schedule schedule = config.schedule();
    validate(config.model, config.market, schedule, config.grid_spec());
    const auto results = mc_asian_prices(config.model, config.market, schedule, strikes, config.sim());

    if (config.output == OutputFormat::Json) {
        json doc = header_json("mc", config, schedule);
        json rows = json::array();
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            rows.push_back(json{{"strike", strikes[i]},
                                {"mc_price", results[i].estimate},
                                {"mc_se", results[i].std_error},
                                {"n_paths", results[i].n_paths},
                                {"seed", results[i].seed}});
        }
        doc["rows"] = rows;
        write_json(out, doc);
        return;
    }
    out << "strike,mc_price,mc_se,n_paths,seed\n";
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        out << shortest(strikes[i]) << ',' << price4(results[i].estimate) << ','
            << fmt::format("{:.6f}", results[i].std_error) << ',' << results[i].n_paths << ',' << results[i].seed
            << '\n';
    }
}

void cmd_european(const RunConfig& config, std::ostream& out) {
    const auto& strikes = require_strikes(config);
    const Schedule schedule = config.schedule();
    validate(config.model, config.market, schedule, config.grid_spec());
    const double spot = config.market.spot;
    const double r = config.market.rate;
    const double maturity = schedule.maturity();

    std::vector<double> calls;
    std::vector<double> puts;
    if (const auto* bs = std::get_if<BlackScholesParams>(&config.model)) {
        const BlackScholesPricer pricer(bs->sigma, r, maturity);
        for (double K : strikes) {
            calls.push_back(pricer.call(spot, K));
            puts.push_back(pricer.put(spot, K));
        }
    } else {
        const auto& vg = std::get<VarianceGammaParams>(config.model);
        LogStrikeCurve curve = fft_call_curve(config.fft, vg, r, maturity);
        const UniformInterpolant put_curve(curve.k_grid, fft_put_values(config.fft, vg, r, maturity));
        const CurvePricer pricer(std::move(curve));
        for (double K : strikes) {
            calls.push_back(pricer.call(spot, K));
            const double k = std::log(K / spot);
            if (!put_curve.grid().contains(k)) {
                throw PricingError(ErrorCode::OutOfCoverage, "strike outside the FFT curve");
            }
            puts.push_back(spot * put_curve(k));
        }
    }

    // |c - p - x + K e^{-rT}| per unit spot
    std::vector<double> residuals;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        residuals.push_back(std::abs(calls[i] - puts[i] - spot + strikes[i] * std::exp(-r * maturity)) / spot);
    }

    if (config.output == OutputFormat::Json) {
        json doc = header_json("european", config, schedule);
        doc["maturity"] = maturity;
        json rows = json::array();
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            rows.push_back(
                json{{"strike", strikes[i]}, {"call", calls[i]}, {"put", puts[i]}, {"parity_residual", residuals[i]}});
        }
        doc["rows"] = rows;
        write_json(out, doc);
        return;
    }
    out << "strike,call,put,parity_residual\n";
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        out << shortest(strikes[i]) << ',' << price4(calls[i]) << ',' << price4(puts[i]) << ','
            << fmt::format("{:.3e}", residuals[i]) << '\n';
    }
}

int run_command(Command command, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
    try {
        std::ostringstream buffer;
        switch (command) {
        case Command::Price:
            cmd_price(config, options, buffer);
            break;
        case Command::Table:
            cmd_table(config, options, buffer);
            break;
        case Command::MonteCarlo:
            cmd_mc(config, buffer);
            break;
        case Command::European:
            cmd_european(config, buffer);
            break;
        }
        if (config.output_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(config.output_path, std::ios::binary);
            if (!(file << buffer.str())) {
                throw PricingError(ErrorCode::ConfigError, "cannot write " + config.output_path);
            }
        }
        return 0;
    } catch (const PricingError& e) {
        err << "error: " << e.what() << '\n';
        return is_configuration_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error: NumericalFailure: " << e.what() << '\n';
        return 3;
    }
}

} // namespace asianrec::cli
