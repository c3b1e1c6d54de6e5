#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dealersim/market_config.hpp"

namespace dealersim {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;

/// Transaction prices P(u) in tick order. `meta` holds the configuration
/// that produced the series; it is empty for ingested or surrogate data.
template <typename Scalar>
struct BasicTickSeries {
    Vector<Scalar> prices;
    std::optional<MarketConfig> meta;

    Eigen::Index size() const noexcept { return prices.size(); }
    bool empty() const noexcept { return prices.size() == 0; }
};

using TickSeries = BasicTickSeries<double>;

/// dP(u) = P(u) - P(u-1), u = 1..n-1.
template <typename Derived>
Vector<typename Derived::Scalar> returns_of(const Eigen::MatrixBase<Derived>& prices) {
    const Eigen::Index n = prices.size();
    if (n < 2) return Vector<typename Derived::Scalar>(0);
    return prices.tail(n - 1) - prices.head(n - 1);
}

/// Inverse of returns_of given P(0). Accumulates left to right so the
/// result is reproducible bit for bit.
template <typename Derived>
Vector<typename Derived::Scalar> prices_from_returns(typename Derived::Scalar p0,
                                                     const Eigen::MatrixBase<Derived>& rets) {
    Vector<typename Derived::Scalar> out(rets.size() + 1);
    out[0] = p0;
    for (Eigen::Index i = 0; i < rets.size(); ++i) out[i + 1] = out[i] + rets[i];
    return out;
}

// Tick CSV: header `u,price`, one row per tick. Prices are written with
// std::to_chars shortest round-trip form, so read(write(x)) == x exactly.

std::string format_double(double v);

void write_ticks_csv(std::ostream& os, const TickSeries& series);
void write_ticks_csv(const std::filesystem::path& path, const TickSeries& series);

TickSeries read_ticks_csv(std::istream& is);
TickSeries read_ticks_csv(const std::filesystem::path& path);

/// Centered simple moving average of odd width w. Output has n - w + 1
/// entries; w == 1 returns the input unchanged.
VectorXd centered_moving_average(const VectorXd& prices, int width);

/// Load a tick CSV and optionally smooth it.
TickSeries ingest_ticks(const std::filesystem::path& path, int smoothing_width = 1);

}  // namespace dealersim
