#include "dealersim/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dealersim/config.hpp"
#include "dealersim/errors.hpp"
#include "dealersim/experiments.hpp"
#include "dealersim/exports.hpp"
#include "dealersim/market.hpp"
#include "dealersim/potential.hpp"
#include "dealersim/surrogate.hpp"
#include "dealersim/tick_series.hpp"

namespace dealersim {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::string manifest;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config, "Key-value config file (a run manifest works too)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", opts.overrides, "Override one setting, key=value (repeatable)");
    cmd->add_option("--manifest", opts.manifest, "Run manifest path (default: <output>.manifest)");
}

RunSettings resolve_settings(const CommonOptions& opts) {
    RunSettings settings;
    if (!opts.config.empty()) load_config(settings, fs::path(opts.config));
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError(kv, "override must be key=value");
        apply_setting(settings, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return settings;
}

fs::path manifest_path(const CommonOptions& opts, const std::string& primary_output) {
    return opts.manifest.empty() ? fs::path(primary_output + ".manifest") : fs::path(opts.manifest);
}

void emit_manifest(const fs::path& path, const RunSettings& settings,
                   const std::vector<const std::vector<std::string_view>*>& groups,
                   std::vector<std::string> header, const std::vector<std::string>& trailing) {
    header.insert(header.begin(), "dealersim run manifest");
    write_file(path, [&](std::ostream& os) { write_manifest(os, settings, groups, header, trailing); });
}

int run_simulate(const CommonOptions& opts, const std::string& output, std::ostream& out) {
    const RunSettings settings = resolve_settings(opts);
    const TickSeries ticks = run_simulation(settings.market);
    write_ticks_csv(fs::path(output), ticks);
    emit_manifest(manifest_path(opts, output), settings, {&keys::market}, {"command: simulate", "output: " + output},
                  {});
    out << "simulate: " << ticks.size() << " ticks -> " << output << '\n';
    return 0;
}

struct AnalyzeOutputs {
    std::string input;
    std::string estimates;
    std::string curve;
    std::string diffusion;
};

int run_analyze(const CommonOptions& opts, const AnalyzeOutputs& io, std::ostream& out) {
    if (io.estimates.empty() && io.curve.empty() && io.diffusion.empty())
        throw CLI::RequiredError("at least one of --estimates, --curve, --diffusion");
    const RunSettings settings = resolve_settings(opts);
    const TickSeries ticks = ingest_ticks(fs::path(io.input), settings.smoothing);
    const AnalysisParams& p = settings.analysis;
    validate(p);

    std::vector<std::string> produced;
    if (!io.estimates.empty()) {
        const auto rolling = rolling_b(ticks.prices, p);
        write_file(fs::path(io.estimates), [&](std::ostream& os) { write_estimates_csv(os, rolling.estimates); });
        produced.push_back("estimates: " + io.estimates);
        out << "analyze: " << rolling.estimates.size() << " windows, " << rolling.n_degenerate << " degenerate";
        if (!rolling.estimates.empty()) out << ", b* = " << format_double(b_star(rolling.estimates));
        out << '\n';
    }
    if (!io.curve.empty()) {
        const Eigen::Index start = settings.curve_start;
        if (start < 0) throw ConfigError("curve_start", "must be >= 0");
        if (start + p.window > ticks.size())
            throw InsufficientHistory(static_cast<std::size_t>(start + p.window),
                                      static_cast<std::size_t>(ticks.size()));
        const auto pairs = displacement_series(ticks.prices.segment(start, p.window), p.m_analysis);
        const auto curve =
            potential_curve(pairs.x, pairs.y, p.m_analysis, settings.n_bins, p.min_displacement_spread);
        write_file(fs::path(io.curve), [&](std::ostream& os) { write_curve_csv(os, curve); });
        produced.push_back("curve: " + io.curve);
    }
    if (!io.diffusion.empty()) {
        const auto var = diffusion_curve(ticks.prices, settings.max_lag);
        write_file(fs::path(io.diffusion), [&](std::ostream& os) { write_diffusion_csv(os, var); });
        produced.push_back("diffusion: " + io.diffusion);
    }
    const std::string primary = !io.estimates.empty() ? io.estimates : !io.curve.empty() ? io.curve : io.diffusion;
    std::vector<std::string> header = {"command: analyze", "input: " + io.input};
    header.insert(header.end(), produced.begin(), produced.end());
    emit_manifest(manifest_path(opts, primary), settings, {&keys::analysis, &keys::outputs}, header, {});
    return 0;
}

int run_null(const CommonOptions& opts, const std::string& source, const std::string& output,
             const std::string& report, std::ostream& out) {
    const RunSettings settings = resolve_settings(opts);
    SurrogateSpec spec = settings.surrogate_spec();
    if (spec.kind == SurrogateKind::shuffled) {
        if (source.empty()) throw CLI::RequiredError("--input (source series for kind = shuffled)");
        spec.source = ingest_ticks(fs::path(source), settings.smoothing);
    }
    const TickSeries series = generate_surrogate(spec);
    if (!output.empty()) write_ticks_csv(fs::path(output), series);

    const auto rolling = rolling_b(series.prices, settings.analysis);
    const double mean = b_star(rolling.estimates);
    const double sd = b_spread(rolling.estimates);
    write_file(fs::path(report), [&](std::ostream& os) {
        os << "kind = " << to_string(spec.kind) << '\n'
           << "ticks = " << series.size() << '\n'
           << "n_windows = " << rolling.estimates.size() << '\n'
           << "n_degenerate = " << rolling.n_degenerate << '\n'
           << "b_mean = " << format_double(mean) << '\n'
           << "b_std = " << format_double(sd) << '\n';
    });
    std::vector<std::string> header = {"command: null", "report: " + report};
    if (!output.empty()) header.push_back("output: " + output);
    if (!source.empty()) header.push_back("input: " + source);
    std::vector<const std::vector<std::string_view>*> groups = {&keys::surrogate, &keys::analysis};
    static const std::vector<std::string_view> seed_key = {"seed"};
    static const std::vector<std::string_view> smoothing_key = {"smoothing"};
    groups.push_back(&seed_key);
    if (spec.kind == SurrogateKind::shuffled) groups.push_back(&smoothing_key);
    emit_manifest(manifest_path(opts, report), settings, groups, header, {});
    out << "null: " << to_string(spec.kind) << ", " << rolling.estimates.size()
        << " windows, b mean = " << format_double(mean) << ", std = " << format_double(sd) << '\n';
    return 0;
}

int run_sweep_cmd(const CommonOptions& opts, const std::string& output, const std::string& report,
                  std::ostream& out) {
    const RunSettings settings = resolve_settings(opts);
    const SweepSpec spec = settings.sweep_spec();
    const SweepResult result = run_sweep(spec);
    write_file(fs::path(output), [&](std::ostream& os) { write_sweep_csv(os, result); });
    if (!report.empty()) write_file(fs::path(report), [&](std::ostream& os) { write_fit_report(os, result); });

    std::vector<std::string> derived;
    for (const auto& r : result.rows)
        derived.push_back("seed_run[d=" + format_double(r.d) + "] = " + std::to_string(r.seed));
    std::vector<std::string> header = {"command: sweep", "output: " + output};
    if (!report.empty()) header.push_back("report: " + report);
    header.push_back("seed_run = hash64(hash64(seed, bits(d)), 0), hash64(a, b) = splitmix64(a ^ splitmix64(b))");
    emit_manifest(manifest_path(opts, output), settings, {&keys::market, &keys::analysis, &keys::sweep}, header,
                  derived);

    write_fit_report(out, result);
    return result.complete() ? 0 : static_cast<int>(ExitCode::partial_sweep);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic dealer-model market simulator and potential-force analysis"};
    app.require_subcommand(1);

    CommonOptions sim_opts, ana_opts, null_opts, sweep_opts;
    std::string sim_output;
    AnalyzeOutputs ana_io;
    std::string null_source, null_output, null_report;
    std::string sweep_output, sweep_report;

    auto* simulate = app.add_subcommand("simulate", "Simulate the dealer market and write a tick CSV");
    add_common(simulate, sim_opts);
    simulate->add_option("-o,--output", sim_output, "Tick CSV output")->required();

    auto* analyze = app.add_subcommand("analyze", "Estimate potential curvature from a tick CSV");
    add_common(analyze, ana_opts);
    analyze->add_option("-i,--input", ana_io.input, "Tick CSV input")->required();
    analyze->add_option("--estimates", ana_io.estimates, "Rolling estimate CSV output");
    analyze->add_option("--curve", ana_io.curve, "Empirical potential curve CSV output");
    analyze->add_option("--diffusion", ana_io.diffusion, "Diffusion curve CSV output");

    auto* null_cmd = app.add_subcommand("null", "Generate a surrogate series and report its curvature estimates");
    add_common(null_cmd, null_opts);
    null_cmd->add_option("-i,--input", null_source, "Source tick CSV (kind = shuffled)");
    null_cmd->add_option("-o,--output", null_output, "Surrogate tick CSV output");
    null_cmd->add_option("-r,--report", null_report, "Calibration report output")->required();

    auto* sweep = app.add_subcommand("sweep", "Sweep the foreseeing coefficient d and fit b* against d");
    add_common(sweep, sweep_opts);
    sweep->add_option("-o,--output", sweep_output, "Sweep result CSV output")->required();
    sweep->add_option("-r,--report", sweep_report, "Line-fit report output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage_error);
    }

    try {
        if (*simulate) return run_simulate(sim_opts, sim_output, out);
        if (*analyze) return run_analyze(ana_opts, ana_io, out);
        if (*null_cmd) return run_null(null_opts, null_source, null_output, null_report, out);
        if (*sweep) return run_sweep_cmd(sweep_opts, sweep_output, sweep_report, out);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return static_cast<int>(ExitCode::usage_error);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::io_error);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::io_error);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::domain_error);
    }
    err << app.help();
    return static_cast<int>(ExitCode::usage_error);
}

}  // namespace dealersim
