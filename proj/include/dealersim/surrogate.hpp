#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dealersim/tick_series.hpp"

namespace dealersim {

enum class SurrogateKind { gaussian_walk, shuffled, planted };

std::string_view to_string(SurrogateKind kind);
SurrogateKind parse_surrogate_kind(std::string_view name);

struct SurrogateSpec {
    SurrogateKind kind = SurrogateKind::gaussian_walk;
    long long length = 100000;
    std::uint64_t seed = 1;
    double volatility = 1.0;
    double planted_b = 0.0;
    int m_analysis = 16;
    std::optional<TickSeries> source;  // shuffled only
};

/// Starting level of generated walks and of the planted warm-up.
inline constexpr double kSurrogateStartPrice = 100.0;

void validate(const SurrogateSpec& spec);

/// P(0) = 100, i.i.d. N(0, volatility^2) increments.
TickSeries gaussian_walk(const SurrogateSpec& spec);

/// Returns permuted by a seeded Fisher-Yates pass (i = n-1 .. 1, swap with
/// uniform_index(i + 1)); prices rebuilt from the source's P(0).
TickSeries shuffled_surrogate(const TickSeries& source, std::uint64_t seed);

/// P(u+1) = P(u) - (b / (m - 1)) (P(u) - P_M(u)) + N(0, volatility^2), the
/// first m prices flat at 100. Shocks are drawn in the same order as
/// gaussian_walk, so b = 0 reproduces its increments shifted by m - 1 ticks.
TickSeries planted_process(const SurrogateSpec& spec);

/// Deterministic core of planted_process: continues `history` (at least m
/// prices) by one price per entry of `shocks`.
VectorXd planted_extend(const VectorXd& history, double planted_b, int m, const VectorXd& shocks);

/// Spectral radius of the companion matrix of the return recursion
/// r(u+1) = -(b / (m - 1)) sum_{i=0}^{m-2} ((m - 1 - i) / m) r(u - i).
/// The displacement process is stationary iff this is < 1.
double planted_spectral_radius(double planted_b, int m);

/// Dispatch on spec.kind.
TickSeries generate_surrogate(const SurrogateSpec& spec);

}  // namespace dealersim
