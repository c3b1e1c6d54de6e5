#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dealersim/errors.hpp"
#include "dealersim/market_config.hpp"
#include "dealersim/potential.hpp"
#include "dealersim/rng.hpp"

namespace dealersim {

inline const std::vector<double> kDefaultSweepGrid = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};

struct SweepSpec {
    MarketConfig base;  // base.seed is the base seed of the policy
    std::vector<double> d_values = kDefaultSweepGrid;
    AnalysisParams analysis;
    long long ticks_per_run = 100000;
    int workers = 1;
};

void validate(const SweepSpec& spec);

/// seed_run = hash64(hash64(base_seed, bits(d)), run_index), with
/// hash64(a, b) = splitmix64(a ^ splitmix64(b)) and bits(-0.0) = bits(0.0).
/// Depends on d itself, never on its position in the grid.
inline std::uint64_t derive_run_seed(std::uint64_t base_seed, double d, std::uint64_t run_index = 0) {
    return hash64(hash64(base_seed, double_bits(d)), run_index);
}

struct SweepRow {
    double d = 0.0;
    std::uint64_t seed = 0;
    double b_star = std::nan("");
    double b_std = std::nan("");
    std::size_t n_windows = 0;
    std::size_t n_degenerate = 0;
    bool flagged = false;  // run stalled or produced no estimates
    std::string error;

    bool operator==(const SweepRow&) const = default;
};

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<LineFit> fit;

    bool complete() const {
        for (const auto& r : rows)
            if (r.flagged) return false;
        return true;
    }
};

/// Ordinary least squares y = intercept + slope x. r2 = 1 - SSR/SST, taken
/// as 1 when y is constant (the fit is then exact).
template <typename DerivedX, typename DerivedY>
LineFit fit_line(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
    if (x.size() != y.size()) throw UnderdeterminedFit();
    std::set<double> distinct;
    for (Eigen::Index i = 0; i < x.size(); ++i) distinct.insert(double(x[i]));
    if (distinct.size() < 2) throw UnderdeterminedFit();
    const double mx = double(x.mean());
    const double my = double(y.mean());
    const Eigen::ArrayXd xc = x.template cast<double>().array() - mx;
    const Eigen::ArrayXd yc = y.template cast<double>().array() - my;
    LineFit f;
    f.slope = (xc * yc).sum() / xc.square().sum();
    f.intercept = my - f.slope * mx;
    const double sst = yc.square().sum();
    const double ssr = (yc - f.slope * xc).square().sum();
    f.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    return f;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Simulate one sweep point and summarize its rolling curvature estimates.
/// Domain failures are reported through SweepRow::flagged.
SweepRow run_sweep_point(const SweepSpec& spec, double d);

/// All points, `spec.workers` at a time; rows follow d_values order. The
/// fit uses the unflagged rows when at least two distinct d remain.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace dealersim
