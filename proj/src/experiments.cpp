#include "dealersim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "dealersim/market.hpp"

namespace dealersim {

void validate(const SweepSpec& spec) {
    validate(spec.base);
    validate(spec.analysis);
    if (spec.d_values.empty()) throw ConfigError("d_values", "must not be empty");
    for (double d : spec.d_values)
        if (!std::isfinite(d)) throw ConfigError("d_values", "must be finite");
    if (spec.ticks_per_run < static_cast<long long>(spec.analysis.window) + spec.analysis.m_analysis)
        throw ConfigError("ticks_per_run", "must be >= window + m_analysis");
    if (spec.workers < 1) throw ConfigError("workers", "must be >= 1");
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw UnderdeterminedFit();
    const auto n = static_cast<Eigen::Index>(x.size());
    return fit_line(Eigen::Map<const Eigen::VectorXd>(x.data(), n), Eigen::Map<const Eigen::VectorXd>(y.data(), n));
}

SweepRow run_sweep_point(const SweepSpec& spec, double d) {
    SweepRow row;
    row.d = d;
    row.seed = derive_run_seed(spec.base.seed, d);
    MarketConfig config = spec.base;
    config.d = d;
    config.seed = row.seed;
    config.n_ticks = spec.ticks_per_run;
    try {
        const TickSeries ticks = run_simulation(config);
        const auto rolling = rolling_b(ticks.prices, spec.analysis);
        row.n_windows = rolling.estimates.size();
        row.n_degenerate = rolling.n_degenerate;
        row.b_star = b_star(rolling.estimates);
        row.b_std = b_spread(rolling.estimates);
    } catch (const Error& e) {
        row.flagged = true;
        row.error = e.what();
    }
    return row;
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate(spec);
    SweepResult result;
    result.rows.resize(spec.d_values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < spec.d_values.size(); i = next++)
            result.rows[i] = run_sweep_point(spec, spec.d_values[i]);
    };
    const auto n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(spec.workers), spec.d_values.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    std::vector<double> xs, ys;
    for (const auto& r : result.rows) {
        if (r.flagged) continue;
        xs.push_back(r.d);
        ys.push_back(r.b_star);
    }
    try {
        result.fit = fit_line(xs, ys);
    } catch (const UnderdeterminedFit&) {
        result.fit.reset();
    }
    return result;
}

}  // namespace dealersim
