#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gsbm/calibrate.hpp"
#include "gsbm/gsbm_process.hpp"
#include "gsbm/pipeline.hpp"
#include "gsbm/poly.hpp"

namespace gsbm {

// Shortest exact decimal form; reruns with the same seed stay byte-identical.
std::string format_double(double v);

// Step function as CSV rows `t_start,value`; the last row repeats the final
// value with t_start equal to the grid end so the span round-trips.
void write_pc_csv(std::ostream& os, const PiecewiseConstantFn& fn);
PiecewiseConstantFn read_pc_csv(std::istream& is);

// Cubic coefficients as a JSON array [a0, a1, a2, a3].
std::string cubic_to_json(const CubicPoly& p);
CubicPoly cubic_from_json(const std::string& text);

// Simulated paths in long format: columns path,t,x,g with header comments
// recording the seed and the parameter breakpoints.
void write_paths_csv(std::ostream& os, const std::vector<GsbmPath>& paths,
                     const std::vector<std::string>& header_comments);

// Density dump (y, p) for plotting.
void write_density_csv(std::ostream& os, const std::vector<double>& ys,
                       const std::vector<double>& ps);

// Volatility series (t, V); gaps are written as empty values. A `# w=...`
// comment records the moving-variance window.
void write_vol_csv(std::ostream& os, const VolSeries& vol);
VolSeries read_vol_csv(std::istream& is);
VolSeries read_vol_csv_file(const std::string& path);

// Rolling estimates: t, mu_hat, sigma_hat, alpha_hat, loglik, flag.
void write_estimates_csv(std::ostream& os, const std::vector<WindowEstimates>& est);

// {"mu":[a0..a3],"sigma":[...],"alpha":[...]}
std::string param_polys_to_json(const ParamPolys& polys);

// {h, L, w, predictions:[{t, v_hat, v_real}], rmse, nrmse_range,
//  nrmse_mean, gaps, baseline:{...}}
std::string report_to_json(const ForecastReport& report);

// Plot data t, v_real, v_hat, rel_error (t is the target time).
void write_plot_csv(std::ostream& os, const ForecastReport& report);

}  // namespace gsbm
