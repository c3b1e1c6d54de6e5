#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "dealersim/experiments.hpp"
#include "dealersim/potential.hpp"

namespace dealersim {

// Plot-ready CSV exports. Floating values use format_double.

/// `window_start,b,slope,intercept,residual_std,n_points`
void write_estimates_csv(std::ostream& os, const std::vector<PotentialEstimate>& estimates);
/// `x,u_of_x,count`
void write_curve_csv(std::ostream& os, const PotentialCurve& curve);
/// `lag,variance`
void write_diffusion_csv(std::ostream& os, const VectorXd& variances);
/// `d,seed,b_star,b_std,n_windows,n_degenerate,status`
void write_sweep_csv(std::ostream& os, const SweepResult& result);
/// `key = value` summary of the b*-d line fit.
void write_fit_report(std::ostream& os, const SweepResult& result);

/// Opens `path` for binary writing, hands the stream to `fn`, checks for
/// failure. Throws IoError.
template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn);

}  // namespace dealersim

#include <fstream>

#include "dealersim/errors.hpp"

template <typename Fn>
void dealersim::write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    fn(os);
    os.flush();
    if (!os) throw IoError("write failed: " + path.string());
}
