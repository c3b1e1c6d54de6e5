#include "dealersim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <type_traits>

#include "dealersim/errors.hpp"
#include "dealersim/tick_series.hpp"

namespace dealersim {

SweepSpec RunSettings::sweep_spec() const {
    SweepSpec s;
    s.base = market;
    s.d_values = d_values;
    s.analysis = analysis;
    s.ticks_per_run = ticks_per_run;
    s.workers = workers;
    return s;
}

SurrogateSpec RunSettings::surrogate_spec() const {
    SurrogateSpec s;
    s.kind = kind;
    s.length = length;
    s.seed = market.seed;
    s.volatility = volatility;
    s.planted_b = planted_b;
    s.m_analysis = analysis.m_analysis;
    return s;
}

namespace keys {
const std::vector<std::string_view> market = {"n_dealers", "spread",        "c_min", "c_max",
                                              "d",         "m_dealer",      "initial_price",
                                              "seed",      "n_ticks",       "max_steps",
                                              "time_step"};
const std::vector<std::string_view> analysis = {"m_analysis", "window", "stride", "min_displacement_spread"};
const std::vector<std::string_view> sweep = {"d_values", "ticks_per_run", "workers"};
const std::vector<std::string_view> surrogate = {"kind", "length", "volatility", "planted_b"};
const std::vector<std::string_view> outputs = {"n_bins", "max_lag", "smoothing", "curve_start"};
}  // namespace keys

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_as(std::string_view key, std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    T out{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(std::string(key), "cannot parse '" + std::string(text) + "'");
    return out;
}

template <typename T>
std::string show(T v) {
    if constexpr (std::is_floating_point_v<T>) {
        return format_double(v);
    } else {
        return std::to_string(v);
    }
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    text = trim(text);
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_as<double>(key, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

struct Field {
    std::function<void(RunSettings&, std::string_view)> set;
    std::function<std::string(const RunSettings&)> get;
};

template <typename T, typename Access>
Field scalar_field(std::string_view key, Access access) {
    return {[key, access](RunSettings& s, std::string_view v) { access(s) = parse_as<T>(key, v); },
            [access](const RunSettings& s) { return show(access(s)); }};
}

#define DEALERSIM_FIELD(type, key, expr) \
    {key, scalar_field<type>(key, [](auto& s) -> auto& { return expr; })}

const std::map<std::string_view, Field>& registry() {
    static const std::map<std::string_view, Field> fields = {
        DEALERSIM_FIELD(int, "n_dealers", s.market.n_dealers),
        DEALERSIM_FIELD(double, "spread", s.market.spread),
        DEALERSIM_FIELD(double, "c_min", s.market.c_min),
        DEALERSIM_FIELD(double, "c_max", s.market.c_max),
        DEALERSIM_FIELD(double, "d", s.market.d),
        DEALERSIM_FIELD(int, "m_dealer", s.market.m_dealer),
        DEALERSIM_FIELD(double, "initial_price", s.market.initial_price),
        DEALERSIM_FIELD(std::uint64_t, "seed", s.market.seed),
        DEALERSIM_FIELD(long long, "n_ticks", s.market.n_ticks),
        DEALERSIM_FIELD(long long, "max_steps", s.market.max_steps),
        DEALERSIM_FIELD(double, "time_step", s.market.time_step),
        DEALERSIM_FIELD(int, "m_analysis", s.analysis.m_analysis),
        DEALERSIM_FIELD(int, "window", s.analysis.window),
        DEALERSIM_FIELD(int, "stride", s.analysis.stride),
        DEALERSIM_FIELD(double, "min_displacement_spread", s.analysis.min_displacement_spread),
        DEALERSIM_FIELD(long long, "ticks_per_run", s.ticks_per_run),
        DEALERSIM_FIELD(int, "workers", s.workers),
        DEALERSIM_FIELD(long long, "length", s.length),
        DEALERSIM_FIELD(double, "volatility", s.volatility),
        DEALERSIM_FIELD(double, "planted_b", s.planted_b),
        DEALERSIM_FIELD(int, "n_bins", s.n_bins),
        DEALERSIM_FIELD(int, "max_lag", s.max_lag),
        DEALERSIM_FIELD(int, "smoothing", s.smoothing),
        DEALERSIM_FIELD(long long, "curve_start", s.curve_start),
        {"d_values",
         {[](RunSettings& s, std::string_view v) { s.d_values = parse_list("d_values", v); },
          [](const RunSettings& s) {
              std::string out;
              for (std::size_t i = 0; i < s.d_values.size(); ++i) {
                  if (i) out += ',';
                  out += format_double(s.d_values[i]);
              }
              return out;
          }}},
        {"kind",
         {[](RunSettings& s, std::string_view v) { s.kind = parse_surrogate_kind(trim(v)); },
          [](const RunSettings& s) { return std::string(to_string(s.kind)); }}},
    };
    return fields;
}

#undef DEALERSIM_FIELD

}  // namespace

bool is_known_key(std::string_view key) { return registry().contains(key); }

void apply_setting(RunSettings& settings, std::string_view key, std::string_view value) {
    const auto it = registry().find(key);
    if (it == registry().end()) throw ConfigError(std::string(key), "unknown key");
    it->second.set(settings, value);
}

std::string setting_value(const RunSettings& settings, std::string_view key) {
    const auto it = registry().find(key);
    if (it == registry().end()) throw ConfigError(std::string(key), "unknown key");
    return it->second.get(settings);
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view row = line;
        if (const auto hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
        row = trim(row);
        if (row.empty()) continue;
        const auto eq = row.find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "expected `key = value`");
        const std::string key(trim(row.substr(0, eq)));
        const std::string value(trim(row.substr(eq + 1)));
        if (!is_known_key(key)) throw ParseError(lineno, "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ParseError(lineno, "duplicate key '" + key + "'");
        out.emplace_back(key, value);
    }
    return out;
}

void load_config(RunSettings& settings, std::istream& is) {
    for (const auto& [key, value] : parse_key_values(is)) apply_setting(settings, key, value);
}

void load_config(RunSettings& settings, const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path.string());
    load_config(settings, is);
}

void write_manifest(std::ostream& os, const RunSettings& settings,
                    const std::vector<const std::vector<std::string_view>*>& key_groups,
                    const std::vector<std::string>& header_comments,
                    const std::vector<std::string>& trailing_comments) {
    for (const auto& c : header_comments) os << "# " << c << '\n';
    for (const auto* group : key_groups)
        for (const auto key : *group) os << key << " = " << setting_value(settings, key) << '\n';
    for (const auto& c : trailing_comments) os << "# " << c << '\n';
}

}  // namespace dealersim
