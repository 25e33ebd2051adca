#pragma once

#include "asianrec/asian_recursion.hpp"
#include "asianrec/montecarlo.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace asianrec::cli {

enum class OutputFormat { Csv, Json };

/// Grid keys given explicitly; everything else follows the model's default grid.
struct GridOverrides {
    std::optional<double> w_min, w_max, w_step;
    std::optional<double> k_min, k_max, k_step;

    bool operator==(const GridOverrides&) const = default;
};

/// Everything a run needs. Sections of the config file:
///
///   [bs] sigma            or   [vg] sigma nu theta      (exactly one)
///   [market] spot rate
///   [schedule] n_obs period_days days_per_year | tau
///   [grid] w_min w_max w_step k_min k_max k_step interpolation quadrature clamp
///          convex_repair
///   [fft] n_points v_max alpha
///   [mc] paths seed antithetic
///   [run] strikes output out workers
struct RunConfig {
    ModelParams model = BlackScholesParams{};
    Market market;
    int n_obs = 1;
    std::optional<double> period_days;
    std::optional<double> tau;
    int days_per_year = 365;
    GridOverrides grid;
    Interpolation interpolation = Interpolation::MonotoneCubic;
    Quadrature quadrature = Quadrature::Simpson;
    bool clamp_negative_second_deriv = true;
    bool convex_repair = true;
    FFTConfig fft;
    std::int64_t mc_paths = 2'000'000;
    std::uint64_t mc_seed = 20130101;
    bool mc_antithetic = false;
    std::vector<double> strikes;
    OutputFormat output = OutputFormat::Csv;
    std::string output_path;
    int workers = 1;

    Schedule schedule() const;
    GridSpec grid_spec() const;
    RecursionConfig recursion() const;
    SimConfig sim() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Sets one "section.key" to a textual value, as if it appeared in the file.
/// Model keys of the other model switch the model (parameters reset to defaults).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Effective configuration with every default written out.
std::string to_ini(const RunConfig& config);

/// "80,85,90", "80:120:5" (inclusive range) or a mix of both.
std::vector<double> parse_strike_list(const std::string& text);

enum class Command { Price, Table, MonteCarlo, European };

struct CommandOptions {
    bool with_mc = false;
    bool delta = false;
};

void cmd_price(const RunConfig& config, const CommandOptions& options, std::ostream& out);
void cmd_table(const RunConfig& config, const CommandOptions& options, std::ostream& out);
void cmd_mc(const RunConfig& config, std::ostream& out);
void cmd_european(const RunConfig& config, std::ostream& out);

/// Runs a command, writing to config.output_path or `out`. Errors go to `err`
/// as "error: <Name>: detail". Returns the process exit code: 0 ok,
/// 2 configuration error, 3 numerical failure.
int run_command(Command command, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

} // namespace asianrec::cli
