#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dealersim/market.hpp"

using namespace dealersim;

namespace {

// Direct transcription of the foreseeing average with k = 1..M:
// (2 / (M (M + 1))) sum_k (M - (k - 1)) dP(u - (k - 1)).
double foresight_oracle(const std::vector<double>& newest_first, int m) {
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) acc += double(m - (k - 1)) * newest_first[static_cast<std::size_t>(k - 1)];
    return 2.0 / (double(m) * double(m + 1)) * acc;
}

MarketConfig two_dealer_config() {
    MarketConfig c;
    c.n_dealers = 2;
    c.spread = 1.0;
    c.d = 0.0;
    c.n_ticks = 1;
    return c;
}

}  // namespace

TEST_CASE("init_market is deterministic under equal seeds") {
    MarketConfig c;
    c.seed = 1;
    const auto a = init_market(c);
    const auto b = init_market(c);
    CHECK((a.bids == b.bids).all());
    CHECK((a.step_sizes == b.step_sizes).all());
    CHECK((a.positions == b.positions).all());

    c.seed = 2;
    const auto other = init_market(c);
    CHECK_FALSE((a.bids == other.bids).all());
}

TEST_CASE("init_market draws within the configured ranges") {
    MarketConfig c;  // N = 300, c in [0.01, 0.02], L = 1, P0 = 100
    const auto s = init_market(c);
    REQUIRE(s.n_dealers() == 300);
    CHECK(s.step_sizes.minCoeff() >= 0.01);
    CHECK(s.step_sizes.maxCoeff() <= 0.02);
    CHECK(s.bids.minCoeff() >= 99.5);
    CHECK(s.bids.maxCoeff() <= 100.5);
    CHECK(((s.positions == 1) || (s.positions == -1)).all());
    CHECK(s.count(Position::buyer) > 100);
    CHECK(s.count(Position::seller) > 100);
    CHECK(s.ticks.empty());
    CHECK(s.recent_returns.empty());
}

TEST_CASE("invalid configurations name the offending field") {
    auto field_of = [](MarketConfig c) -> std::string {
        try {
            init_market(c);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    MarketConfig c;
    c.n_dealers = 1;
    CHECK(field_of(c) == "n_dealers");
    c = {};
    c.spread = 0.0;
    CHECK(field_of(c) == "spread");
    c = {};
    c.c_min = 0.03;
    CHECK(field_of(c) == "c_max");
    c = {};
    c.c_min = -0.01;
    CHECK(field_of(c) == "c_min");
    c = {};
    c.m_dealer = 0;
    CHECK(field_of(c) == "m_dealer");
    c = {};
    c.time_step = 0.0;
    CHECK(field_of(c) == "time_step");
}

TEST_CASE("weighted_mean_dp") {
    SUBCASE("constant returns average to themselves") {
        const Eigen::VectorXd r = Eigen::VectorXd::Constant(10, 0.013);
        CHECK(weighted_mean_dp(r, 10) == doctest::Approx(0.013).epsilon(1e-14));
    }
    SUBCASE("hand-evaluated M = 2") {
        Eigen::VectorXd r(2);
        r << 0.3, 0.0;
        CHECK(weighted_mean_dp(r, 2) == doctest::Approx(0.2).epsilon(1e-15));
    }
    SUBCASE("zero input") { CHECK(weighted_mean_dp(Eigen::VectorXd::Zero(7), 7) == 0.0); }
    SUBCASE("insufficient history") {
        CHECK_THROWS_AS(weighted_mean_dp(Eigen::VectorXd::Zero(3), 4), InsufficientHistory);
    }
    SUBCASE("matches the direct formula on random input") {
        Rng rng(11);
        for (int m = 1; m <= 40; ++m) {
            std::vector<double> v(static_cast<std::size_t>(m));
            for (auto& x : v) x = rng.gaussian();
            const Eigen::Map<const Eigen::VectorXd> r(v.data(), m);
            CHECK(weighted_mean_dp(r, m) == doctest::Approx(foresight_oracle(v, m)).epsilon(1e-13));
        }
    }
}

TEST_CASE("foresight weights are normalized and decay linearly") {
    const double eps = std::numeric_limits<double>::epsilon();
    for (int m = 1; m <= 64; ++m) {
        const auto w = foresight_weights(m);
        CHECK(std::abs(w.sum() - 1.0) <= 4 * eps);
        CHECK(w[0] == doctest::Approx(double(m) * w[m - 1]));
    }
}

TEST_CASE("advance_one_step applies sigma c + d <dP>") {
    MarketConfig c = two_dealer_config();
    SUBCASE("buyer rises by c") {
        auto s = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 90.0, Position::seller, 0.02}});
        advance_one_step(s);
        CHECK(s.bids[0] == doctest::Approx(100.01).epsilon(1e-15));
        CHECK(s.bids[1] == doctest::Approx(89.98).epsilon(1e-15));
        CHECK(s.steps == 1);
    }
    SUBCASE("seller falls by c") {
        auto s = make_market(c, {{0, 100.0, Position::seller, 0.02}, {1, 90.0, Position::buyer, 0.01}});
        advance_one_step(s);
        CHECK(s.bids[0] == doctest::Approx(99.98).epsilon(1e-15));
    }
    SUBCASE("foreseeing term shifts every dealer by d <dP>") {
        c.d = 1.0;
        auto s = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 90.0, Position::seller, 0.02}});
        s.foresight = 0.05;
        const auto before = s.rng.next_u64();
        auto probe = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 90.0, Position::seller, 0.02}});
        probe.foresight = 0.05;
        advance_one_step(probe);
        CHECK(probe.bids[0] == doctest::Approx(100.06).epsilon(1e-15));
        CHECK(probe.bids[1] == doctest::Approx(90.03).epsilon(1e-15));
        // Dynamics never touch the random source.
        CHECK(probe.rng.next_u64() == before);
    }
    SUBCASE("time step scales the increment") {
        c.time_step = 0.1;
        auto s = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 90.0, Position::seller, 0.02}});
        advance_one_step(s);
        CHECK(s.bids[0] == doctest::Approx(100.001).epsilon(1e-15));
    }
}

TEST_CASE("find_crossing") {
    const MarketConfig c = two_dealer_config();
    SUBCASE("bid below the lowest ask") {
        auto s = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 99.2, Position::seller, 0.01}});
        CHECK_FALSE(find_crossing(s).has_value());
    }
    SUBCASE("bid reaches the lowest ask") {
        auto s = make_market(c, {{0, 100.3, Position::buyer, 0.01}, {1, 99.2, Position::seller, 0.01}});
        const auto pair = find_crossing(s);
        REQUIRE(pair.has_value());
        CHECK(*pair == TradePair{0, 1});
    }
    SUBCASE("equal bids never cross") {
        auto s = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 100.0, Position::seller, 0.01}});
        CHECK_FALSE(find_crossing(s).has_value());
    }
    SUBCASE("one-sided market has no pair") {
        auto s = make_market(c, {{0, 200.0, Position::buyer, 0.01}, {1, 100.0, Position::buyer, 0.01}});
        CHECK_FALSE(find_crossing(s).has_value());
    }
    SUBCASE("ties go to the lowest index") {
        auto s = make_market(c, {{0, 99.0, Position::seller, 0.01},
                                 {1, 101.0, Position::buyer, 0.01},
                                 {2, 99.0, Position::seller, 0.01},
                                 {3, 101.0, Position::buyer, 0.01}});
        const auto pair = find_crossing(s);
        REQUIRE(pair.has_value());
        CHECK(*pair == TradePair{1, 0});
    }
    SUBCASE("the best bid among buyers is used, not the best bid overall") {
        // Dealer 0 quotes the highest bid but is a seller; only buyer 1 can lift.
        auto s = make_market(c, {{0, 110.0, Position::seller, 0.01},
                                 {1, 100.3, Position::buyer, 0.01},
                                 {2, 99.2, Position::seller, 0.01}});
        const auto pair = find_crossing(s);
        REQUIRE(pair.has_value());
        CHECK(*pair == TradePair{1, 2});
    }
}

TEST_CASE("execute_trade") {
    const MarketConfig c = two_dealer_config();
    auto s = make_market(c, {{0, 100.3, Position::buyer, 0.01}, {1, 99.2, Position::seller, 0.01}});
    const int buyers_before = s.count(Position::buyer);
    const double price = execute_trade(s, {0, 1});
    CHECK(price == doctest::Approx(100.25).epsilon(1e-15));
    REQUIRE(s.ticks.size() == 1);
    CHECK(s.ticks[0] == price);
    CHECK(s.positions[0] == -1);
    CHECK(s.positions[1] == +1);
    CHECK(s.count(Position::buyer) == buyers_before);
    // Prices are untouched by a trade.
    CHECK(s.bids[0] == 100.3);
    CHECK(s.bids[1] == 99.2);

    auto uncrossed = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 99.2, Position::seller, 0.01}});
    CHECK_THROWS_AS(execute_trade(uncrossed, {0, 1}), std::logic_error);
    CHECK_THROWS_AS(execute_trade(s, {0, 0}), std::logic_error);
}

TEST_CASE("two-dealer hand simulation: first trade on step 25 at 100.25") {
    // Gap to cross is 0.5 and closes at 0.01 + 0.01 per step.
    auto s = make_market(two_dealer_config(),
                         {{0, 100.00, Position::buyer, 0.01}, {1, 99.50, Position::seller, 0.01}});
    run_until(s, 1);
    CHECK(s.steps == 25);
    REQUIRE(s.ticks.size() == 1);
    CHECK(std::abs(s.ticks[0] - 100.25) <= 1e-12);
}

TEST_CASE("foresight stays zero during warm-up") {
    MarketConfig c;
    c.n_dealers = 50;
    c.d = 0.5;
    c.m_dealer = 8;
    auto s = init_market(c);
    while (s.ticks.size() < 8) {
        advance_one_step(s);
        resolve_crossings(s, 8);
        CHECK(s.foresight == 0.0);
    }
    run_until(s, 9);  // 8 returns now exist
    CHECK(s.recent_returns.size() == 8);
    Eigen::VectorXd r(8);
    for (int k = 0; k < 8; ++k) r[k] = s.recent_returns[s.recent_returns.size() - 1 - static_cast<std::size_t>(k)];
    CHECK(s.foresight == doctest::Approx(weighted_mean_dp(r, 8)));
}

TEST_CASE("run_simulation is reproducible and stalls cleanly") {
    MarketConfig c;
    c.n_ticks = 3000;
    c.d = 0.3;
    const auto a = run_simulation(c);
    const auto b = run_simulation(c);
    REQUIRE(a.size() == 3000);
    CHECK((a.prices.array() == b.prices.array()).all());
    REQUIRE(a.meta.has_value());
    CHECK(*a.meta == c);

    c.max_steps = 5;
    try {
        run_simulation(c);
        FAIL("expected MarketStalled");
    } catch (const MarketStalled& e) {
        CHECK(e.ticks_obtained() < 3000);
    }
}

TEST_CASE("one-sided market stalls") {
    MarketConfig c = two_dealer_config();
    c.max_steps = 1000;
    auto s = make_market(c, {{0, 100.0, Position::buyer, 0.01}, {1, 99.0, Position::buyer, 0.01}});
    CHECK_THROWS_AS(run_until(s, 1), MarketStalled);
}

TEST_CASE("trades are legal, never self-trades, and conserve positions") {
    MarketConfig c;
    c.d = 0.5;
    c.n_dealers = 120;
    auto s = init_market(c);
    const int buyers = s.count(Position::buyer);
    std::size_t trades = 0;
    while (trades < 20000) {
        advance_one_step(s);
        while (auto pair = find_crossing(s)) {
            REQUIRE(pair->buyer != pair->seller);
            const double bid = s.bids[pair->buyer];
            const double ask = s.bids[pair->seller] + c.spread;
            const double price = execute_trade(s, *pair);
            CHECK(price == doctest::Approx(0.5 * (bid + ask)));
            CHECK(price <= bid + kCrossingTolerance);
            CHECK(price >= ask - kCrossingTolerance);
            REQUIRE(s.count(Position::buyer) == buyers);
            ++trades;
        }
    }
}

TEST_CASE("with d = 0 the series does not depend on m_dealer") {
    MarketConfig c;
    c.n_ticks = 5000;
    c.d = 0.0;
    c.m_dealer = 3;
    const auto a = run_simulation(c);
    c.m_dealer = 40;
    const auto b = run_simulation(c);
    CHECK((a.prices.array() == b.prices.array()).all());
}
