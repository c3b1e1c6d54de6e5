#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dealersim/experiments.hpp"
#include "dealersim/market_config.hpp"
#include "dealersim/potential.hpp"
#include "dealersim/surrogate.hpp"

namespace dealersim {

/// Everything a CLI run can be configured with. Each field is addressable by
/// the key of the same name in a config file:
///
///   market:    n_dealers spread c_min c_max d m_dealer initial_price seed
///              n_ticks max_steps time_step
///   analysis:  m_analysis window stride min_displacement_spread
///   sweep:     d_values ticks_per_run workers
///   surrogate: kind length volatility planted_b   (seed is shared)
///   outputs:   n_bins max_lag smoothing curve_start
struct RunSettings {
    MarketConfig market;
    AnalysisParams analysis;
    std::vector<double> d_values = kDefaultSweepGrid;
    long long ticks_per_run = 100000;
    int workers = 1;
    SurrogateKind kind = SurrogateKind::gaussian_walk;
    long long length = 100000;
    double volatility = 1.0;
    double planted_b = 0.0;
    int n_bins = 25;
    int max_lag = 100;
    int smoothing = 1;
    long long curve_start = 0;

    SweepSpec sweep_spec() const;
    SurrogateSpec surrogate_spec() const;
};

/// Key groups, in manifest order.
namespace keys {
extern const std::vector<std::string_view> market;
extern const std::vector<std::string_view> analysis;
extern const std::vector<std::string_view> sweep;
extern const std::vector<std::string_view> surrogate;
extern const std::vector<std::string_view> outputs;
}  // namespace keys

bool is_known_key(std::string_view key);

/// Set one field from its textual value. Throws ConfigError for unknown keys
/// and unparsable values.
void apply_setting(RunSettings& settings, std::string_view key, std::string_view value);

/// Textual value of one field, formatted so that apply_setting restores it
/// exactly.
std::string setting_value(const RunSettings& settings, std::string_view key);

/// Flat `key = value` lines; `#` starts a comment; blank lines ignored.
/// Unknown or repeated keys are errors (ParseError with the line number).
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& is);

void load_config(RunSettings& settings, std::istream& is);
void load_config(RunSettings& settings, const std::filesystem::path& path);

/// Manifest: comment header lines, then `key = value` for every key in
/// `key_groups`, then trailing comment lines. It loads back as a config file.
void write_manifest(std::ostream& os, const RunSettings& settings,
                    const std::vector<const std::vector<std::string_view>*>& key_groups,
                    const std::vector<std::string>& header_comments,
                    const std::vector<std::string>& trailing_comments);

}  // namespace dealersim
