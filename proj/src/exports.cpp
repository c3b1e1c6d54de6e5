#include "dealersim/exports.hpp"

#include <ostream>

#include "dealersim/tick_series.hpp"

namespace dealersim {

void write_estimates_csv(std::ostream& os, const std::vector<PotentialEstimate>& estimates) {
    os << "window_start,b,slope,intercept,residual_std,n_points\n";
    for (const auto& e : estimates)
        os << e.window_start << ',' << format_double(e.b) << ',' << format_double(e.slope) << ','
           << format_double(e.intercept) << ',' << format_double(e.residual_std) << ',' << e.n_points << '\n';
}

void write_curve_csv(std::ostream& os, const PotentialCurve& curve) {
    os << "x,u_of_x,count\n";
    for (Eigen::Index i = 0; i < curve.bin_centers.size(); ++i)
        os << format_double(curve.bin_centers[i]) << ',' << format_double(curve.u_values[i]) << ','
           << curve.counts[static_cast<std::size_t>(i)] << '\n';
}

void write_diffusion_csv(std::ostream& os, const VectorXd& variances) {
    os << "lag,variance\n";
    for (Eigen::Index i = 0; i < variances.size(); ++i) os << (i + 1) << ',' << format_double(variances[i]) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "d,seed,b_star,b_std,n_windows,n_degenerate,status\n";
    for (const auto& r : result.rows)
        os << format_double(r.d) << ',' << r.seed << ',' << format_double(r.b_star) << ','
           << format_double(r.b_std) << ',' << r.n_windows << ',' << r.n_degenerate << ','
           << (r.flagged ? "flagged" : "ok") << '\n';
}

void write_fit_report(std::ostream& os, const SweepResult& result) {
    std::size_t used = 0;
    for (const auto& r : result.rows) used += r.flagged ? 0 : 1;
    os << "rows = " << result.rows.size() << '\n' << "rows_fitted = " << used << '\n';
    if (result.fit) {
        os << "intercept = " << format_double(result.fit->intercept) << '\n'
           << "slope = " << format_double(result.fit->slope) << '\n'
           << "r2 = " << format_double(result.fit->r2) << '\n';
    } else {
        os << "fit = underdetermined\n";
    }
    for (const auto& r : result.rows)
        if (r.flagged) os << "flagged d = " << format_double(r.d) << ": " << r.error << '\n';
}

}  // namespace dealersim
