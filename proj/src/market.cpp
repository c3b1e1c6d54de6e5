#include "dealersim/market.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dealersim {

void validate(const MarketConfig& c) {
    if (c.n_dealers < 2) throw ConfigError("n_dealers", "must be >= 2 (a trade needs two dealers)");
    if (!(c.spread > 0.0) || !std::isfinite(c.spread)) throw ConfigError("spread", "must be > 0");
    if (!(c.c_min > 0.0)) throw ConfigError("c_min", "must be > 0");
    if (!(c.c_max >= c.c_min) || !std::isfinite(c.c_max))
        throw ConfigError("c_max", "must be >= c_min");
    if (!std::isfinite(c.d)) throw ConfigError("d", "must be finite");
    if (c.m_dealer < 1) throw ConfigError("m_dealer", "must be >= 1");
    if (!std::isfinite(c.initial_price)) throw ConfigError("initial_price", "must be finite");
    if (c.n_ticks < 0) throw ConfigError("n_ticks", "must be >= 0");
    if (c.max_steps < 1) throw ConfigError("max_steps", "must be >= 1");
    if (!(c.time_step > 0.0) || !std::isfinite(c.time_step))
        throw ConfigError("time_step", "must be > 0");
}

MarketState init_market(const MarketConfig& config) {
    validate(config);
    MarketState s(config);
    const int n = config.n_dealers;
    s.bids.resize(n);
    s.step_sizes.resize(n);
    s.positions.resize(n);
    const double half = 0.5 * config.spread;
    // Draw order per dealer: step size, bid, position.
    for (int i = 0; i < n; ++i) {
        s.step_sizes[i] = s.rng.uniform(config.c_min, config.c_max);
        s.bids[i] = s.rng.uniform(config.initial_price - half, config.initial_price + half);
        s.positions[i] = s.rng.coin() ? sign(Position::buyer) : sign(Position::seller);
    }
    return s;
}

MarketState make_market(const MarketConfig& config, const std::vector<DealerState>& dealers) {
    MarketConfig c = config;
    c.n_dealers = static_cast<int>(dealers.size());
    validate(c);
    MarketState s(c);
    const int n = c.n_dealers;
    s.bids.resize(n);
    s.step_sizes.resize(n);
    s.positions.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!(dealers[i].step_size > 0.0))
            throw ConfigError("step_size", "dealer " + std::to_string(i) + " must be > 0");
        s.bids[i] = dealers[i].bid;
        s.step_sizes[i] = dealers[i].step_size;
        s.positions[i] = sign(dealers[i].position);
    }
    return s;
}

void advance_one_step(MarketState& s) {
    const double dt = s.config.time_step;
    if (s.config.d == 0.0) {
        s.bids += s.positions.cast<double>() * s.step_sizes * dt;
    } else {
        const double shift = s.config.d * s.foresight;
        s.bids += (s.positions.cast<double>() * s.step_sizes + shift) * dt;
    }
    ++s.steps;
}

std::optional<TradePair> find_crossing(const MarketState& s) {
    int buyer = -1;
    int seller = -1;
    const int n = s.n_dealers();
    for (int i = 0; i < n; ++i) {
        if (s.positions[i] > 0) {
            if (buyer < 0 || s.bids[i] > s.bids[buyer]) buyer = i;
        } else {
            if (seller < 0 || s.bids[i] < s.bids[seller]) seller = i;
        }
    }
    if (buyer < 0 || seller < 0) return std::nullopt;
    const double ask = s.bids[seller] + s.config.spread;
    if (s.bids[buyer] < ask - kCrossingTolerance) return std::nullopt;
    return TradePair{buyer, seller};
}

namespace {

void refresh_foresight(MarketState& s) {
    const int m = s.config.m_dealer;
    if (static_cast<int>(s.recent_returns.size()) < m) {
        s.foresight = 0.0;
        return;
    }
    Eigen::VectorXd newest_first(m);
    for (int k = 0; k < m; ++k) newest_first[k] = s.recent_returns[s.recent_returns.size() - 1 - k];
    s.foresight = weighted_mean_dp(newest_first, m);
}

}  // namespace

double execute_trade(MarketState& s, TradePair pair) {
    const int n = s.n_dealers();
    if (pair.buyer < 0 || pair.buyer >= n || pair.seller < 0 || pair.seller >= n ||
        pair.buyer == pair.seller)
        throw std::logic_error("execute_trade: invalid dealer indices");
    if (s.positions[pair.buyer] != sign(Position::buyer) ||
        s.positions[pair.seller] != sign(Position::seller))
        throw std::logic_error("execute_trade: pair is not a buyer/seller pair");
    const double bid = s.bids[pair.buyer];
    const double ask = s.bids[pair.seller] + s.config.spread;
    if (bid < ask - kCrossingTolerance) throw std::logic_error("execute_trade: pair is not crossed");

    const double price = 0.5 * (bid + ask);
    if (!s.ticks.empty()) {
        s.recent_returns.push_back(price - s.ticks.back());
        if (static_cast<int>(s.recent_returns.size()) > s.config.m_dealer) s.recent_returns.pop_front();
    }
    s.ticks.push_back(price);
    s.positions[pair.buyer] = -s.positions[pair.buyer];
    s.positions[pair.seller] = -s.positions[pair.seller];
    refresh_foresight(s);
    return price;
}

std::size_t resolve_crossings(MarketState& s, std::size_t tick_limit) {
    std::size_t trades = 0;
    while (s.ticks.size() < tick_limit) {
        const auto pair = find_crossing(s);
        if (!pair) break;
        execute_trade(s, *pair);
        ++trades;
    }
    return trades;
}

void run_until(MarketState& s, std::size_t n_ticks) {
    s.ticks.reserve(n_ticks);
    resolve_crossings(s, n_ticks);
    while (s.ticks.size() < n_ticks) {
        if (s.steps >= s.config.max_steps)
            throw MarketStalled(s.ticks.size(), n_ticks, static_cast<std::size_t>(s.steps));
        advance_one_step(s);
        resolve_crossings(s, n_ticks);
    }
}

TickSeries run_simulation(const MarketConfig& config) {
    MarketState s = init_market(config);
    run_until(s, static_cast<std::size_t>(config.n_ticks));
    TickSeries out;
    out.prices = Eigen::Map<const Eigen::VectorXd>(s.ticks.data(), static_cast<Eigen::Index>(s.ticks.size()));
    out.meta = config;
    return out;
}

}  // namespace dealersim
