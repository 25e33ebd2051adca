// asianrec: discretely monitored arithmetic Asian calls by recursion, with a
// Monte Carlo cross-check.
//
//   asianrec table --config tests/fixtures/table1_bs.ini --with-mc --paths 200000
//   asianrec price --config tests/fixtures/table2_vg.ini --strike 100 --delta

#include "asianrec/cli.hpp"
#include "asianrec/errors.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <map>

using namespace asianrec;

namespace {

struct Flags {
    std::string config_path;
    std::optional<double> strike;
    std::string strikes;
    bool with_mc = false;
    bool delta = false;
    std::string output;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> paths;
    std::optional<int> workers;
    std::vector<std::string> settings;
    bool print_config = false;
    bool verbose = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "INI run configuration");
    cmd->add_option("--strike", f.strike, "single strike");
    cmd->add_option("--strikes", f.strikes, "strike list: 80,90,100 or 80:120:5");
    cmd->add_option("--output", f.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", f.out_path, "write to this file instead of stdout");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
    cmd->add_option("--paths", f.paths, "Monte Carlo path count");
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--set", f.settings, "override section.key=value (repeatable)");
    cmd->add_flag("--print-config", f.print_config, "print the effective configuration and exit");
    cmd->add_flag("-v,--verbose", f.verbose, "debug logging on stderr");
}

cli::RunConfig build_config(const Flags& f) {
    cli::RunConfig config = f.config_path.empty() ? cli::RunConfig{} : cli::load_run_config(f.config_path);
    for (const auto& setting : f.settings) {
        const auto eq = setting.find('=');
        if (eq == std::string::npos) {
            throw PricingError(ErrorCode::ConfigError, "--set expects section.key=value, got '" + setting + "'");
        }
        cli::apply_setting(config, setting.substr(0, eq), setting.substr(eq + 1));
    }
    if (!f.strikes.empty()) {
        config.strikes = cli::parse_strike_list(f.strikes);
    }
    if (f.strike) {
        config.strikes = {*f.strike};
    }
    if (!f.output.empty()) {
        config.output = f.output == "json" ? cli::OutputFormat::Json : cli::OutputFormat::Csv;
    }
    if (!f.out_path.empty()) {
        config.output_path = f.out_path;
    }
    if (f.seed) {
        config.mc_seed = *f.seed;
    }
    if (f.paths) {
        config.mc_paths = *f.paths;
    }
    if (f.workers) {
        config.workers = *f.workers;
    }
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arithmetic Asian option prices by recursion over observation dates"};
    app.require_subcommand(1);
    Flags flags;
    const std::map<std::string, cli::Command> commands{{"price", cli::Command::Price},
                                                       {"table", cli::Command::Table},
                                                       {"mc", cli::Command::MonteCarlo},
                                                       {"european", cli::Command::European}};
    auto* price = app.add_subcommand("price", "recursion price for one strike");
    add_common(price, flags);
    price->add_flag("--delta", flags.delta, "also print the delta");
    auto* table = app.add_subcommand("table", "prices and deltas for a strike list");
    add_common(table, flags);
    table->add_flag("--with-mc", flags.with_mc, "add Monte Carlo columns");
    add_common(app.add_subcommand("mc", "Monte Carlo prices"), flags);
    add_common(app.add_subcommand("european", "one-period European calls and puts at maturity N*tau"), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: ConfigError: " << e.what() << '\n';
        return 2;
    }

    auto logger = spdlog::stderr_logger_mt("asianrec");
    spdlog::set_default_logger(logger);
    spdlog::set_level(flags.verbose ? spdlog::level::debug : spdlog::level::warn);

    cli::RunConfig config;
    try {
        config = build_config(flags);
    } catch (const PricingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (flags.print_config) {
        std::cout << cli::to_ini(config);
        return 0;
    }
    const cli::Command command = commands.at(app.get_subcommands().front()->get_name());
    return cli::run_command(command, config, cli::CommandOptions{flags.with_mc, flags.delta}, std::cout, std::cerr);
}
