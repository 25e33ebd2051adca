#include "asianrec/cli.hpp"

#include "asianrec/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace asianrec::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw PricingError(ErrorCode::ConfigError, what); }

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        config_error(key + ": cannot parse '" + text + "' as a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            config_error(key + ": value must be finite");
        }
    }
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "true" || t == "yes" || t == "on" || t == "1") {
        return true;
    }
    if (t == "false" || t == "no" || t == "off" || t == "0") {
        return false;
    }
    config_error(key + ": expected true or false, got '" + text + "'");
}

// Shortest text that reads back to the same double.
std::string exact(double x) { return fmt::format("{}", x); }

std::string interpolation_name(Interpolation kind) {
    return kind == Interpolation::Linear ? "linear" : "monotone-cubic";
}

std::string quadrature_name(Quadrature kind) { return kind == Quadrature::Measure ? "measure" : "simpson"; }

void set_model_param(RunConfig& config, const std::string& section, const std::string& name,
                     const std::string& key, const std::string& value) {
    if (section == "bs") {
        if (!std::holds_alternative<BlackScholesParams>(config.model)) {
            config.model = BlackScholesParams{};
        }
        auto& bs = std::get<BlackScholesParams>(config.model);
        if (name == "sigma") {
            bs.sigma = parse_number<double>(key, value);
            return;
        }
    } else {
        if (!std::holds_alternative<VarianceGammaParams>(config.model)) {
            config.model = VarianceGammaParams{};
        }
        auto& vg = std::get<VarianceGammaParams>(config.model);
        if (name == "sigma") {
            vg.sigma = parse_number<double>(key, value);
            return;
        }
        if (name == "nu") {
            vg.nu = parse_number<double>(key, value);
            return;
        }
        if (name == "theta") {
            vg.theta = parse_number<double>(key, value);
            return;
        }
    }
    config_error("unknown key " + key);
}

} // namespace

Schedule RunConfig::schedule() const {
    if (period_days && tau) {
        config_error("schedule: give either period_days or tau, not both");
    }
    if (days_per_year <= 0) {
        config_error("schedule.days_per_year must be positive");
    }
    if (tau) {
        return Schedule{n_obs, *tau, days_per_year};
    }
    return Schedule::from_days(n_obs, period_days.value_or(1.0), days_per_year);
}

GridSpec RunConfig::grid_spec() const {
    GridSpec g = GridSpec::default_for(model);
    g.w_min = grid.w_min.value_or(g.w_min);
    g.w_max = grid.w_max.value_or(g.w_max);
    g.w_step = grid.w_step.value_or(g.w_step);
    g.k_min = grid.k_min.value_or(g.k_min);
    g.k_max = grid.k_max.value_or(g.k_max);
    g.k_step = grid.k_step.value_or(g.k_step);
    return g;
}

RecursionConfig RunConfig::recursion() const {
    RecursionConfig cfg = RecursionConfig::defaults_for(model);
    cfg.grid = grid_spec();
    cfg.interpolation = interpolation;
    cfg.quadrature = quadrature;
    cfg.clamp_negative_second_deriv = clamp_negative_second_deriv;
    cfg.convex_repair = convex_repair;
    cfg.fft = fft;
    cfg.workers = workers;
    return cfg;
}

SimConfig RunConfig::sim() const { return SimConfig{mc_paths, mc_seed, mc_antithetic, workers}; }

std::vector<double> parse_strike_list(const std::string& text) {
    std::vector<double> strikes;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        const auto first = item.find(':');
        if (first == std::string::npos) {
            strikes.push_back(parse_number<double>("strikes", item));
            continue;
        }
        const auto second = item.find(':', first + 1);
        if (second == std::string::npos) {
            config_error("strikes: a range needs the form lo:hi:step, got '" + item + "'");
        }
        const double lo = parse_number<double>("strikes", item.substr(0, first));
        const double hi = parse_number<double>("strikes", item.substr(first + 1, second - first - 1));
        const double step = parse_number<double>("strikes", item.substr(second + 1));
        if (!(step > 0.0) || hi < lo) {
            config_error("strikes: range '" + item + "' needs step > 0 and hi >= lo");
        }
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= count; ++i) {
            strikes.push_back(lo + static_cast<double>(i) * step);
        }
    }
    return strikes;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        config_error("setting '" + key + "' must have the form section.key");
    }
    const std::string section = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);

    if (section == "bs" || section == "vg") {
        set_model_param(config, section, name, key, value);
        return;
    }
    if (section == "market") {
        if (name == "spot") {
            config.market.spot = parse_number<double>(key, value);
            return;
        }
        if (name == "rate") {
            config.market.rate = parse_number<double>(key, value);
            return;
        }
    } else if (section == "schedule") {
        if (name == "n_obs") {
            config.n_obs = parse_number<int>(key, value);
            return;
        }
        if (name == "period_days") {
            config.period_days = parse_number<double>(key, value);
            config.tau.reset();
            return;
        }
        if (name == "tau") {
            config.tau = parse_number<double>(key, value);
            config.period_days.reset();
            return;
        }
        if (name == "days_per_year") {
            config.days_per_year = parse_number<int>(key, value);
            return;
        }
    } else if (section == "grid") {
        std::optional<double>* slot = nullptr;
        if (name == "w_min") slot = &config.grid.w_min;
        if (name == "w_max") slot = &config.grid.w_max;
        if (name == "w_step") slot = &config.grid.w_step;
        if (name == "k_min") slot = &config.grid.k_min;
        if (name == "k_max") slot = &config.grid.k_max;
        if (name == "k_step") slot = &config.grid.k_step;
        if (slot != nullptr) {
            *slot = parse_number<double>(key, value);
            return;
        }
        if (name == "interpolation") {
            const std::string v = trim(value);
            if (v == "linear") {
                config.interpolation = Interpolation::Linear;
            } else if (v == "monotone-cubic") {
                config.interpolation = Interpolation::MonotoneCubic;
            } else {
                config_error(key + ": expected linear or monotone-cubic, got '" + value + "'");
            }
            return;
        }
        if (name == "quadrature") {
            const std::string v = trim(value);
            if (v == "simpson") {
                config.quadrature = Quadrature::Simpson;
            } else if (v == "measure") {
                config.quadrature = Quadrature::Measure;
            } else {
                config_error(key + ": expected simpson or measure, got '" + value + "'");
            }
            return;
        }
        if (name == "clamp") {
            config.clamp_negative_second_deriv = parse_bool(key, value);
            return;
        }
        if (name == "convex_repair") {
            config.convex_repair = parse_bool(key, value);
            return;
        }
    } else if (section == "fft") {
        if (name == "n_points") {
            config.fft.n_points = parse_number<std::size_t>(key, value);
            return;
        }
        if (name == "v_max") {
            config.fft.v_max = parse_number<double>(key, value);
            return;
        }
        if (name == "alpha") {
            config.fft.alpha = parse_number<double>(key, value);
            return;
        }
    } else if (section == "mc") {
        if (name == "paths") {
            config.mc_paths = parse_number<std::int64_t>(key, value);
            return;
        }
        if (name == "seed") {
            config.mc_seed = parse_number<std::uint64_t>(key, value);
            return;
        }
        if (name == "antithetic") {
            config.mc_antithetic = parse_bool(key, value);
            return;
        }
    } else if (section == "run") {
        if (name == "strikes") {
            config.strikes = parse_strike_list(value);
            return;
        }
        if (name == "output") {
            const std::string v = trim(value);
            if (v == "csv") {
                config.output = OutputFormat::Csv;
            } else if (v == "json") {
                config.output = OutputFormat::Json;
            } else {
                config_error(key + ": expected csv or json, got '" + value + "'");
            }
            return;
        }
        if (name == "out") {
            config.output_path = trim(value);
            return;
        }
        if (name == "workers") {
            config.workers = parse_number<int>(key, value);
            return;
        }
    }
    config_error("unknown key " + key);
}

RunConfig parse_run_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        config_error(std::string("malformed config: ") + e.what());
    }
    const bool has_bs = tree.find("bs") != tree.not_found();
    const bool has_vg = tree.find("vg") != tree.not_found();
    if (has_bs == has_vg) {
        config_error("config needs exactly one model block, [bs] or [vg]");
    }

    RunConfig config;
    config.model = has_vg ? ModelParams{VarianceGammaParams{}} : ModelParams{BlackScholesParams{}};
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty()) {
            config_error("key '" + section + "' is outside any section");
        }
        for (const auto& [name, node] : entries) {
            apply_setting(config, section + "." + name, node.data());
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        config_error("cannot open config file " + path);
    }
    return parse_run_config(in);
}

std::string to_ini(const RunConfig& config) {
    std::string out;
    auto line = [&out](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };

    if (const auto* bs = std::get_if<BlackScholesParams>(&config.model)) {
        out += "[bs]\n";
        line("sigma", exact(bs->sigma));
    } else {
        const auto& vg = std::get<VarianceGammaParams>(config.model);
        out += "[vg]\n";
        line("sigma", exact(vg.sigma));
        line("nu", exact(vg.nu));
        line("theta", exact(vg.theta));
    }

    out += "\n[market]\n";
    line("spot", exact(config.market.spot));
    line("rate", exact(config.market.rate));

    out += "\n[schedule]\n";
    line("n_obs", std::to_string(config.n_obs));
    if (config.tau) {
        line("tau", exact(*config.tau));
    } else {
        line("period_days", exact(config.period_days.value_or(1.0)));
    }
    line("days_per_year", std::to_string(config.days_per_year));

    const GridSpec g = config.grid_spec();
    out += "\n[grid]\n";
    line("w_min", exact(g.w_min));
    line("w_max", exact(g.w_max));
    line("w_step", exact(g.w_step));
    line("k_min", exact(g.k_min));
    line("k_max", exact(g.k_max));
    line("k_step", exact(g.k_step));
    line("interpolation", interpolation_name(config.interpolation));
    line("quadrature", quadrature_name(config.quadrature));
    line("clamp", config.clamp_negative_second_deriv ? "true" : "false");
    line("convex_repair", config.convex_repair ? "true" : "false");

    out += "\n[fft]\n";
    line("n_points", std::to_string(config.fft.n_points));
    line("v_max", exact(config.fft.v_max));
    line("alpha", exact(config.fft.alpha));

    out += "\n[mc]\n";
    line("paths", std::to_string(config.mc_paths));
    line("seed", std::to_string(config.mc_seed));
    line("antithetic", config.mc_antithetic ? "true" : "false");

    out += "\n[run]\n";
    std::string strikes;
    for (std::size_t i = 0; i < config.strikes.size(); ++i) {
        strikes += (i == 0 ? "" : ",") + exact(config.strikes[i]);
    }
    line("strikes", strikes);
    line("output", config.output == OutputFormat::Json ? "json" : "csv");
    line("out", config.output_path);
    line("workers", std::to_string(config.workers));
    return out;
}

} // namespace asianrec::cli
