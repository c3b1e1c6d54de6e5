#pragma once

#include <cstdint>

namespace dealersim {

/// Simulation parameters. Defaults match the standard experiment:
/// N = 300, L = 1.0, c in [0.01, 0.02].
struct MarketConfig {
    int n_dealers = 300;
    double spread = 1.0;
    double c_min = 0.01;
    double c_max = 0.02;
    double d = 0.0;
    int m_dealer = 16;
    double initial_price = 100.0;
    std::uint64_t seed = 1;
    long long n_ticks = 100000;
    long long max_steps = 100000000;
    // Integration step of the bid dynamics, in simulation time units.
    double time_step = 1.0;

    bool operator==(const MarketConfig&) const = default;
};

/// Throws ConfigError naming the first offending field.
void validate(const MarketConfig& config);

}  // namespace dealersim
