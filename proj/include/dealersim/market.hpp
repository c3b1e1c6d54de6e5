#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "dealersim/errors.hpp"
#include "dealersim/market_config.hpp"
#include "dealersim/rng.hpp"
#include "dealersim/tick_series.hpp"

namespace dealersim {

enum class Position : int { seller = -1, buyer = +1 };

constexpr int sign(Position p) noexcept { return static_cast<int>(p); }
constexpr Position flipped(Position p) noexcept {
    return p == Position::buyer ? Position::seller : Position::buyer;
}

/// Read-only view of one dealer.
struct DealerState {
    int id;
    double bid;
    Position position;
    double step_size;

    double ask(double spread) const noexcept { return bid + spread; }
};

/// Bid and ask may differ by this much and still count as crossed. Bids
/// advance by repeated float additions, so exact ties land a few ulps off.
inline constexpr double kCrossingTolerance = 1e-9;

/// Dealer population plus tick history. Stored column-wise so the bid update
/// is a single array expression.
struct MarketState {
    explicit MarketState(const MarketConfig& c) : config(c), rng(c.seed) {}

    MarketConfig config;
    Eigen::ArrayXd bids;
    Eigen::ArrayXd step_sizes;
    Eigen::ArrayXi positions;  // +1 buyer, -1 seller
    std::vector<double> ticks;
    std::deque<double> recent_returns;  // newest at the back, at most m_dealer
    double foresight = 0.0;             // <dP>_M; 0 until m_dealer returns exist
    long long steps = 0;
    Rng rng;

    int n_dealers() const noexcept { return static_cast<int>(bids.size()); }

    DealerState dealer(int i) const {
        return {i, bids[i], static_cast<Position>(positions[i]), step_sizes[i]};
    }

    int count(Position p) const noexcept { return static_cast<int>((positions == sign(p)).count()); }
};

struct TradePair {
    int buyer;
    int seller;

    bool operator==(const TradePair&) const = default;
};

/// Normalized linear weights of the foreseeing average, newest first:
/// w_k = 2 (M - k) / (M (M + 1)), k = 0..M-1.
template <typename Scalar = double>
Vector<Scalar> foresight_weights(int m) {
    Vector<Scalar> w(m);
    const Scalar norm = Scalar(2) / (Scalar(m) * Scalar(m + 1));
    for (int k = 0; k < m; ++k) w[k] = norm * Scalar(m - k);
    return w;
}

/// Weighted mean of the last m price changes, `newest_first[0]` being the
/// latest. Only the first m entries are read.
template <typename Derived>
typename Derived::Scalar weighted_mean_dp(const Eigen::MatrixBase<Derived>& newest_first, int m) {
    using Scalar = typename Derived::Scalar;
    if (m < 1) throw ConfigError("m_dealer", "must be >= 1");
    if (newest_first.size() < m)
        throw InsufficientHistory(static_cast<std::size_t>(m),
                                  static_cast<std::size_t>(newest_first.size()));
    Scalar acc(0);
    for (int k = 0; k < m; ++k) acc += Scalar(m - k) * newest_first[k];
    return acc * (Scalar(2) / (Scalar(m) * Scalar(m + 1)));
}

/// Draw the initial population from config.seed. Throws ConfigError.
MarketState init_market(const MarketConfig& config);

/// Build a state from explicit dealers (hand-constructed scenarios).
MarketState make_market(const MarketConfig& config, const std::vector<DealerState>& dealers);

/// bid_i += (sigma_i c_i + d <dP>_M) * time_step, all dealers from the same
/// foresight snapshot.
void advance_one_step(MarketState& state);

/// Highest-bid buyer against lowest-ask seller, if the bid reaches the ask.
/// Ties go to the lowest index.
std::optional<TradePair> find_crossing(const MarketState& state);

/// Record the mid-price tick, flip both positions, refresh the foresight
/// average. Returns the tick price. Throws std::logic_error when `pair` is
/// not a crossed buyer/seller pair.
double execute_trade(MarketState& state, TradePair pair);

/// Resolve crossings one pair at a time until the book is uncrossed or
/// `tick_limit` total ticks exist. Returns the number of trades executed.
std::size_t resolve_crossings(MarketState& state, std::size_t tick_limit);

/// Step and trade until `n_ticks` ticks exist. Throws MarketStalled when
/// config.max_steps is exhausted first.
void run_until(MarketState& state, std::size_t n_ticks);

TickSeries run_simulation(const MarketConfig& config);

}  // namespace dealersim
