#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "dealersim/errors.hpp"
#include "dealersim/tick_series.hpp"

namespace dealersim {

/// Potential-estimation parameters. m_analysis is the super-moving-average
/// length; each window regresses window - m_analysis (x, y) pairs.
struct AnalysisParams {
    int m_analysis = 16;
    int window = 2000;
    int stride = 100;
    double min_displacement_spread = 1e-12;

    bool operator==(const AnalysisParams&) const = default;
};

inline void validate(const AnalysisParams& p) {
    if (p.m_analysis < 2) throw ConfigError("m_analysis", "must be >= 2");
    if (p.window <= p.m_analysis) throw ConfigError("window", "must be > m_analysis");
    if (p.stride < 1) throw ConfigError("stride", "must be >= 1");
    if (!(p.min_displacement_spread >= 0.0)) throw ConfigError("min_displacement_spread", "must be >= 0");
}

template <typename Scalar>
struct BasicPotentialEstimate {
    Eigen::Index window_start = 0;
    Scalar b{};
    Scalar slope{};
    Scalar intercept{};
    Scalar residual_std{};
    Eigen::Index n_points = 0;
};

using PotentialEstimate = BasicPotentialEstimate<double>;

/// Displacement x(u) = P(u) - P_M(u) and next-tick drift y(u) = P(u+1) - P(u)
/// for u = m-1 .. n-2. Entry j belongs to tick u = j + m - 1.
template <typename Scalar>
struct BasicDisplacementSeries {
    Vector<Scalar> x;
    Vector<Scalar> y;

    Eigen::Index size() const noexcept { return x.size(); }
};

using DisplacementSeries = BasicDisplacementSeries<double>;

template <typename Scalar>
struct BasicPotentialCurve {
    Vector<Scalar> bin_centers;
    Vector<Scalar> u_values;  // (M - 1) U(x), minimum shifted to 0
    std::vector<Eigen::Index> counts;
};

using PotentialCurve = BasicPotentialCurve<double>;

template <typename Scalar>
struct BasicRollingEstimates {
    std::vector<BasicPotentialEstimate<Scalar>> estimates;
    std::size_t n_degenerate = 0;
};

using RollingEstimates = BasicRollingEstimates<double>;

/// P_M(u) = (1/m) sum_{k=0}^{m-1} P(u-k).
template <typename Derived>
typename Derived::Scalar super_moving_average(const Eigen::MatrixBase<Derived>& prices, Eigen::Index u,
                                              int m) {
    if (m < 1) throw ConfigError("m_analysis", "must be >= 1");
    if (u < m - 1 || u >= prices.size())
        throw InsufficientHistory(static_cast<std::size_t>(m), static_cast<std::size_t>(std::max<Eigen::Index>(u + 1, 0)));
    return prices.segment(u - m + 1, m).mean();
}

/// Accumulated as (1/m) sum_k (P(u) - P(u-k)) so that a constant offset on
/// the prices cancels before any rounding of the displacement.
template <typename Derived>
BasicDisplacementSeries<typename Derived::Scalar> displacement_series(const Eigen::MatrixBase<Derived>& prices,
                                                                      int m) {
    using Scalar = typename Derived::Scalar;
    if (m < 1) throw ConfigError("m_analysis", "must be >= 1");
    const Eigen::Index n = prices.size();
    if (n <= m + 1) throw InsufficientHistory(static_cast<std::size_t>(m + 2), static_cast<std::size_t>(n));
    const Eigen::Index count = n - m;
    BasicDisplacementSeries<Scalar> out;
    out.x.resize(count);
    out.y.resize(count);
    for (Eigen::Index j = 0; j < count; ++j) {
        const Eigen::Index u = j + m - 1;
        Scalar acc(0);
        for (int k = 1; k < m; ++k) acc += prices[u] - prices[u - k];
        out.x[j] = acc / Scalar(m);
        out.y[j] = prices[u + 1] - prices[u];
    }
    return out;
}

/// Ordinary least squares y = slope x + intercept; b = -(m - 1) slope.
/// Throws DegenerateWindow when std(x) < min_spread or x is constant.
template <typename DerivedX, typename DerivedY>
BasicPotentialEstimate<typename DerivedX::Scalar> estimate_b(const Eigen::MatrixBase<DerivedX>& x,
                                                             const Eigen::MatrixBase<DerivedY>& y, int m,
                                                             double min_spread = 1e-12) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = x.size();
    if (n != y.size()) throw DegenerateWindow("degenerate window: x and y lengths differ");
    if (n < 3) throw DegenerateWindow("degenerate window: fewer than 3 points");
    const Scalar mx = x.mean();
    const Scalar my = y.mean();
    const auto xc = (x.array() - mx).eval();
    const auto yc = (y.array() - my).eval();
    const Scalar sxx = xc.square().sum();
    const Scalar sd = std::sqrt(sxx / Scalar(n));
    if (!(sxx > Scalar(0)) || sd < Scalar(min_spread))
        throw DegenerateWindow("degenerate window: displacement spread below threshold");

    BasicPotentialEstimate<Scalar> est;
    est.slope = (xc * yc).sum() / sxx;
    est.intercept = my - est.slope * mx;
    est.b = -Scalar(m - 1) * est.slope;
    const Scalar ssr = (yc - est.slope * xc).square().sum();
    est.residual_std = std::sqrt(ssr / Scalar(n - 2));
    est.n_points = n;
    return est;
}

/// Number of window positions for a series of n ticks: starts 0, stride,
/// 2 stride, ... while start + window + m_analysis <= n.
inline Eigen::Index window_count(Eigen::Index n, const AnalysisParams& p) {
    const Eigen::Index span = Eigen::Index(p.window) + p.m_analysis;
    if (n < span) return 0;
    return (n - span) / p.stride + 1;
}

/// Window k starts at tick k * stride and regresses the window - m_analysis
/// pairs whose ticks all lie in [start, start + window).
template <typename Derived>
BasicRollingEstimates<typename Derived::Scalar> rolling_b(const Eigen::MatrixBase<Derived>& prices,
                                                          const AnalysisParams& p) {
    using Scalar = typename Derived::Scalar;
    validate(p);
    const Eigen::Index n = prices.size();
    const Eigen::Index windows = window_count(n, p);
    if (windows == 0)
        throw InsufficientHistory(static_cast<std::size_t>(p.window + p.m_analysis), static_cast<std::size_t>(n));
    const auto pairs = displacement_series(prices, p.m_analysis);
    const Eigen::Index points = p.window - p.m_analysis;

    BasicRollingEstimates<Scalar> out;
    out.estimates.reserve(static_cast<std::size_t>(windows));
    for (Eigen::Index k = 0; k < windows; ++k) {
        const Eigen::Index start = k * p.stride;
        try {
            auto est = estimate_b(pairs.x.segment(start, points), pairs.y.segment(start, points), p.m_analysis,
                                  p.min_displacement_spread);
            est.window_start = start;
            out.estimates.push_back(est);
        } catch (const DegenerateWindow&) {
            ++out.n_degenerate;
        }
    }
    return out;
}

template <typename Scalar>
Scalar b_star(const std::vector<BasicPotentialEstimate<Scalar>>& estimates) {
    if (estimates.empty()) throw NoEstimates();
    Scalar acc(0);
    for (const auto& e : estimates) acc += e.b;
    return acc / Scalar(estimates.size());
}

/// Population standard deviation of the window curvatures.
template <typename Scalar>
Scalar b_spread(const std::vector<BasicPotentialEstimate<Scalar>>& estimates) {
    if (estimates.empty()) throw NoEstimates();
    const Scalar mean = b_star(estimates);
    Scalar acc(0);
    for (const auto& e : estimates) acc += (e.b - mean) * (e.b - mean);
    return std::sqrt(acc / Scalar(estimates.size()));
}

/// Linear-interpolated quantile of an unsorted sample, q in [0, 1].
template <typename Scalar>
Scalar quantile(std::vector<Scalar> values, double q) {
    if (values.empty()) throw NoEstimates();
    std::sort(values.begin(), values.end());
    const double pos = q * double(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const Scalar frac = Scalar(pos - double(lo));
    return values[lo] + frac * (values[hi] - values[lo]);
}

/// Empirical potential: bin x uniformly over its central 98% range, take
/// the mean drift per bin and integrate (M - 1) U' = -(M - 1) ybar with the
/// trapezoid rule across populated bins. Empty bins are omitted.
template <typename DerivedX, typename DerivedY>
BasicPotentialCurve<typename DerivedX::Scalar> potential_curve(const Eigen::MatrixBase<DerivedX>& x,
                                                               const Eigen::MatrixBase<DerivedY>& y, int m,
                                                               int n_bins = 25, double min_spread = 1e-12) {
    using Scalar = typename DerivedX::Scalar;
    if (n_bins < 3) throw ConfigError("n_bins", "must be >= 3");
    const Eigen::Index n = x.size();
    if (n != y.size() || n < 3) throw DegenerateWindow("degenerate window: too few pairs");
    const Scalar mx = x.mean();
    const Scalar sd = std::sqrt((x.array() - mx).square().mean());
    if (!(sd > Scalar(0)) || sd < Scalar(min_spread))
        throw DegenerateWindow("degenerate window: displacement spread below threshold");

    std::vector<Scalar> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) xs.push_back(x[i]);
    const Scalar lo = quantile(xs, 0.01);
    const Scalar hi = quantile(std::move(xs), 0.99);
    if (!(hi > lo)) throw DegenerateWindow("degenerate window: central displacement range is empty");
    const Scalar width = (hi - lo) / Scalar(n_bins);

    std::vector<Scalar> sums(static_cast<std::size_t>(n_bins), Scalar(0));
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(n_bins), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        auto bin = static_cast<Eigen::Index>(std::floor((x[i] - lo) / width));
        bin = std::clamp<Eigen::Index>(bin, 0, n_bins - 1);
        sums[static_cast<std::size_t>(bin)] += y[i];
        ++counts[static_cast<std::size_t>(bin)];
    }

    std::vector<Scalar> centers, forces;
    BasicPotentialCurve<Scalar> curve;
    for (int b = 0; b < n_bins; ++b) {
        if (counts[static_cast<std::size_t>(b)] == 0) continue;
        centers.push_back(lo + (Scalar(b) + Scalar(0.5)) * width);
        forces.push_back(-Scalar(m - 1) * sums[static_cast<std::size_t>(b)] /
                         Scalar(counts[static_cast<std::size_t>(b)]));
        curve.counts.push_back(counts[static_cast<std::size_t>(b)]);
    }
    const auto populated = static_cast<Eigen::Index>(centers.size());
    curve.bin_centers.resize(populated);
    curve.u_values.resize(populated);
    Scalar acc(0);
    for (Eigen::Index j = 0; j < populated; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (j > 0) acc += Scalar(0.5) * (forces[sj - 1] + forces[sj]) * (centers[sj] - centers[sj - 1]);
        curve.bin_centers[j] = centers[sj];
        curve.u_values[j] = acc;
    }
    if (populated > 0) curve.u_values.array() -= curve.u_values.minCoeff();
    return curve;
}

/// Variance of P(u + lag) - P(u) over all valid u, lag = 1..max_lag.
/// Entry lag - 1 holds the variance at that lag.
template <typename Derived>
Vector<typename Derived::Scalar> diffusion_curve(const Eigen::MatrixBase<Derived>& prices, int max_lag) {
    using Scalar = typename Derived::Scalar;
    if (max_lag < 1) throw ConfigError("max_lag", "must be >= 1");
    const Eigen::Index n = prices.size();
    if (n <= Eigen::Index(max_lag) + 1)
        throw InsufficientHistory(static_cast<std::size_t>(max_lag + 2), static_cast<std::size_t>(n));
    Vector<Scalar> out(max_lag);
    for (int lag = 1; lag <= max_lag; ++lag) {
        const auto diffs = (prices.tail(n - lag) - prices.head(n - lag)).eval();
        out[lag - 1] = (diffs.array() - diffs.mean()).square().mean();
    }
    return out;
}

}  // namespace dealersim
