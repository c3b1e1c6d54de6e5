#include "dealersim/surrogate.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

#include "dealersim/errors.hpp"
#include "dealersim/rng.hpp"

namespace dealersim {

std::string_view to_string(SurrogateKind kind) {
    switch (kind) {
        case SurrogateKind::gaussian_walk: return "gaussian_walk";
        case SurrogateKind::shuffled: return "shuffled";
        case SurrogateKind::planted: return "planted";
    }
    return "?";
}

SurrogateKind parse_surrogate_kind(std::string_view name) {
    if (name == "gaussian_walk") return SurrogateKind::gaussian_walk;
    if (name == "shuffled") return SurrogateKind::shuffled;
    if (name == "planted") return SurrogateKind::planted;
    throw ConfigError("kind", "unknown surrogate kind '" + std::string(name) +
                                  "' (expected gaussian_walk, shuffled or planted)");
}

double planted_spectral_radius(double planted_b, int m) {
    const int order = m - 1;
    if (order < 1) return 0.0;
    const double k = planted_b / double(m - 1);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(order, order);
    for (int i = 0; i < order; ++i) companion(0, i) = -k * double(m - 1 - i) / double(m);
    for (int i = 1; i < order; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void validate(const SurrogateSpec& spec) {
    if (spec.kind == SurrogateKind::shuffled) {
        if (!spec.source) throw ConfigError("source", "shuffled surrogate needs a source series");
        return;
    }
    if (spec.length < 2) throw ConfigError("length", "must be >= 2");
    if (!(spec.volatility > 0.0) || !std::isfinite(spec.volatility))
        throw ConfigError("volatility", "must be > 0");
    if (spec.kind == SurrogateKind::planted) {
        if (spec.m_analysis < 2) throw ConfigError("m_analysis", "must be >= 2");
        if (spec.length <= spec.m_analysis) throw ConfigError("length", "must exceed m_analysis");
        const double bound = double(spec.m_analysis - 1);
        if (!(std::abs(spec.planted_b) < bound))
            throw ConfigError("planted_b", "|planted_b| must be < m_analysis - 1 = " + std::to_string(bound));
        const double radius = planted_spectral_radius(spec.planted_b, spec.m_analysis);
        if (!(radius < 1.0))
            throw ConfigError("planted_b", "unstable recursion: companion spectral radius " +
                                               std::to_string(radius) + " >= 1");
    }
}

TickSeries gaussian_walk(const SurrogateSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    VectorXd rets(spec.length - 1);
    for (Eigen::Index i = 0; i < rets.size(); ++i) rets[i] = spec.volatility * rng.gaussian();
    return TickSeries{prices_from_returns(kSurrogateStartPrice, rets), std::nullopt};
}

TickSeries shuffled_surrogate(const TickSeries& source, std::uint64_t seed) {
    if (source.size() < 3) throw InsufficientHistory(3, static_cast<std::size_t>(source.size()));
    VectorXd rets = returns_of(source.prices);
    Rng rng(seed);
    for (Eigen::Index i = rets.size() - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(rets[i], rets[j]);
    }
    return TickSeries{prices_from_returns(source.prices[0], rets), std::nullopt};
}

VectorXd planted_extend(const VectorXd& history, double planted_b, int m, const VectorXd& shocks) {
    if (m < 2) throw ConfigError("m_analysis", "must be >= 2");
    if (history.size() < m) throw InsufficientHistory(static_cast<std::size_t>(m), static_cast<std::size_t>(history.size()));
    const double k = planted_b / double(m - 1);
    VectorXd p(history.size() + shocks.size());
    p.head(history.size()) = history;
    for (Eigen::Index i = 0; i < shocks.size(); ++i) {
        const Eigen::Index u = history.size() - 1 + i;
        double acc = 0.0;
        for (int j = 1; j < m; ++j) acc += p[u] - p[u - j];
        p[u + 1] = p[u] - k * (acc / double(m)) + shocks[i];
    }
    return p;
}

TickSeries planted_process(const SurrogateSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const int m = spec.m_analysis;
    VectorXd shocks(spec.length - m);
    for (Eigen::Index i = 0; i < shocks.size(); ++i) shocks[i] = spec.volatility * rng.gaussian();
    const VectorXd warmup = VectorXd::Constant(m, kSurrogateStartPrice);
    return TickSeries{planted_extend(warmup, spec.planted_b, m, shocks), std::nullopt};
}

TickSeries generate_surrogate(const SurrogateSpec& spec) {
    switch (spec.kind) {
        case SurrogateKind::gaussian_walk: return gaussian_walk(spec);
        case SurrogateKind::shuffled:
            validate(spec);
            return shuffled_surrogate(*spec.source, spec.seed);
        case SurrogateKind::planted: return planted_process(spec);
    }
    throw ConfigError("kind", "unhandled surrogate kind");
}

}  // namespace dealersim
