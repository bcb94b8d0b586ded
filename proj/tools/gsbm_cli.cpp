// Command-line surface: simulation, density evaluation, calibration,
// forecasting and report emission. One machine-readable JSON summary line
// goes to stdout; diagnostics go to stderr.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gsbm/gsbm_process.hpp"
#include "gsbm/io.hpp"
#include "gsbm/pipeline.hpp"
#include "gsbm/quadrature.hpp"
#include "gsbm/rng.hpp"
#include "gsbm/skew_bm.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

// Breakpoint syntax "t0:v0,t1:v1,...". The final interval extends to t_end.
gsbm::PiecewiseConstantFn parse_breakpoints(const std::string& spec, double t_end,
                                            gsbm::PiecewiseConstantFn::Codomain codomain) {
  std::vector<double> ts, vs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw gsbm::DomainError("breakpoint spec needs 't:value' pairs: " + spec);
    try {
      ts.push_back(std::stod(item.substr(0, colon)));
      vs.push_back(std::stod(item.substr(colon + 1)));
    } catch (...) {
      throw gsbm::DomainError("unparseable breakpoint entry: " + item);
    }
  }
  if (ts.empty()) throw gsbm::DomainError("empty breakpoint spec");
  if (!(ts.back() < t_end))
    throw gsbm::DomainError("last breakpoint must lie before the horizon");
  ts.push_back(t_end);
  return gsbm::PiecewiseConstantFn(
      gsbm::TimeGrid(Eigen::Map<const Eigen::VectorXd>(ts.data(),
                                                       static_cast<Eigen::Index>(ts.size()))),
      Eigen::Map<const Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size())),
      codomain);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gsbm::IoError("cannot open output file: " + path);
  return out;
}

// Fills options the user did not pass from a JSON config file; explicit
// flags always win.
class ConfigOverlay {
 public:
  explicit ConfigOverlay(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw gsbm::IoError("cannot open config file: " + path);
    in >> root_;
  }

  template <typename T>
  void apply(const CLI::Option* opt, const std::string& section, const std::string& key,
             T& value) const {
    if (opt != nullptr && opt->count() > 0) return;
    if (!root_.is_object()) return;
    const json* scope = &root_;
    if (root_.contains(section) && root_[section].is_object()) scope = &root_[section];
    if (scope->contains(key)) value = (*scope)[key].get<T>();
  }

 private:
  json root_;
};

struct CommonArgs {
  std::uint64_t seed = 0;
  std::string config;
};

int run_simulate(const CommonArgs& common, const std::string& alpha_spec,
                 const std::string& mu_spec, const std::string& sigma_spec, double horizon,
                 int steps, int paths, double x0, double g0, const std::string& out_path) {
  if (steps < 1) throw gsbm::DomainError("--steps must be at least 1");
  if (paths < 1) throw gsbm::DomainError("--paths must be at least 1");

  const auto alpha = parse_breakpoints(alpha_spec, horizon, {{0.0, 1.0}});
  const auto mu = parse_breakpoints(mu_spec, horizon, std::nullopt);
  const auto sigma = parse_breakpoints(sigma_spec, horizon, std::nullopt);
  const gsbm::GsbmModel model(mu, sigma, alpha, g0);

  // The simulation grid must contain every parameter breakpoint; merge them
  // into the regular grid.
  std::vector<double> pts;
  for (Eigen::Index i = 0; i <= steps; ++i)
    pts.push_back(horizon * static_cast<double>(i) / static_cast<double>(steps));
  for (double b : alpha.breakpoints_in(0.0, horizon)) pts.push_back(b);
  for (double b : mu.breakpoints_in(0.0, horizon)) pts.push_back(b);
  for (double b : sigma.breakpoints_in(0.0, horizon)) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double a, double b) { return std::abs(a - b) <= 1e-12 * horizon; }),
            pts.end());
  const gsbm::TimeGrid grid(
      Eigen::Map<const Eigen::VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size())));

  std::vector<gsbm::GsbmPath> gpaths;
  gpaths.reserve(static_cast<std::size_t>(paths));
  for (int p = 0; p < paths; ++p) {
    const gsbm::SbmPath driver = gsbm::simulate_path(
        alpha, grid, x0, gsbm::StreamKey{common.seed, static_cast<std::uint64_t>(p)});
    gpaths.push_back(gsbm::gsbm_path(model, driver));
  }

  auto out = open_output(out_path);
  std::vector<std::string> comments{
      "seed=" + std::to_string(common.seed), "alpha=" + alpha_spec, "mu=" + mu_spec,
      "sigma=" + sigma_spec,
      "x0=" + gsbm::format_double(x0) + " g0=" + gsbm::format_double(g0)};
  gsbm::write_paths_csv(out, gpaths, comments);

  std::cout << json{{"command", "simulate"},
                    {"paths", paths},
                    {"steps", steps},
                    {"rows", paths * static_cast<long>(grid.size())},
                    {"seed", common.seed},
                    {"out", out_path}}
                   .dump()
            << '\n';
  return kExitOk;
}

int run_density(const std::string& alpha_spec, double s, double t, double x, double ymin,
                double ymax, int n, const std::string& out_path) {
  if (n < 2) throw gsbm::DomainError("--n must be at least 2");
  if (!(ymax > ymin)) throw gsbm::DomainError("--ymax must exceed --ymin");
  const auto alpha = parse_breakpoints(alpha_spec, t, {{0.0, 1.0}});

  std::vector<double> ys(static_cast<std::size_t>(n)), ps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double y = ymin + (ymax - ymin) * static_cast<double>(i) / static_cast<double>(n - 1);
    ys[static_cast<std::size_t>(i)] = y;
    ps[static_cast<std::size_t>(i)] = gsbm::density_inhom(s, t, x, y, alpha);
  }

  double trapezoid = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    trapezoid += 0.5 * (ps[static_cast<std::size_t>(i)] + ps[static_cast<std::size_t>(i) + 1]) *
                 (ys[static_cast<std::size_t>(i) + 1] - ys[static_cast<std::size_t>(i)]);

  auto out = open_output(out_path);
  gsbm::write_density_csv(out, ys, ps);
  std::cout << json{{"command", "density"},
                    {"n", n},
                    {"trapezoid_integral", trapezoid},
                    {"out", out_path}}
                   .dump()
            << '\n';
  return kExitOk;
}

int run_ingest(const std::string& input, int w, const std::string& out_path) {
  const gsbm::RawSeries raw = gsbm::ingest_csv(input);
  const gsbm::VolSeries vol = gsbm::moving_variance(raw, w);
  auto out = open_output(out_path);
  gsbm::write_vol_csv(out, vol);

  json summary{{"command", "ingest"},
               {"rows", raw.totals.size()},
               {"w", w},
               {"vol_length", vol.size()},
               {"out", out_path}};
  if (raw.totals.size() >= 4) {
    try {
      const gsbm::DescriptiveStats st = gsbm::descriptive_stats(raw.totals);
      summary["stats"] = {{"mean", st.mean},
                          {"stddev", st.stddev},
                          {"skewness", st.skewness},
                          {"kurtosis", st.kurtosis}};
    } catch (const gsbm::DomainError&) {
      // degenerate input series; stats omitted
    }
  }
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

int run_calibrate(const std::string& input, int L, const std::string& out_path,
                  const std::string& polys_path) {
  const gsbm::VolSeries vol = gsbm::read_vol_csv_file(input);
  const auto estimates = gsbm::rolling_calibrate(vol.values, L);

  auto out = open_output(out_path);
  gsbm::write_estimates_csv(out, estimates);

  int usable = 0;
  for (const auto& e : estimates) usable += e.usable() ? 1 : 0;

  json summary{{"command", "calibrate"},
               {"L", L},
               {"windows", estimates.size()},
               {"usable", usable},
               {"out", out_path}};
  if (!polys_path.empty()) {
    const gsbm::ParamPolys polys = gsbm::fit_parameter_polys(estimates);
    auto pout = open_output(polys_path);
    pout << gsbm::param_polys_to_json(polys) << '\n';
    summary["polys"] = polys_path;
  }
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

int run_forecast(const std::string& input, int L, int h, int w_override,
                 const std::string& out_path, const std::string& plot_path) {
  gsbm::VolSeries vol = gsbm::read_vol_csv_file(input);
  if (w_override > 0) vol.window_w = w_override;
  const gsbm::ForecastReport report = gsbm::rolling_forecast(vol, L, h);

  auto out = open_output(out_path);
  out << gsbm::report_to_json(report) << '\n';
  if (!plot_path.empty()) {
    auto plot = open_output(plot_path);
    gsbm::write_plot_csv(plot, report);
  }

  std::cout << json{{"command", "forecast"},
                    {"L", L},
                    {"h", h},
                    {"predictions", report.predictions.size()},
                    {"gaps", report.gaps},
                    {"rmse", report.metrics.rmse},
                    {"nrmse_range", report.metrics.nrmse_range},
                    {"nrmse_mean", report.metrics.nrmse_mean},
                    {"out", out_path}}
                   .dump()
            << '\n';
  return kExitOk;
}

// Oracle suites kept fast enough to run before every analysis batch.
int run_selftest(std::uint64_t seed) {
  json checks = json::array();
  bool ok = true;
  gsbm::RngStream rng(seed, 0, 0);

  auto record = [&](const std::string& name, double worst, double tol) {
    checks.push_back({{"check", name}, {"max_error", worst}, {"tolerance", tol}});
    if (!(worst <= tol)) ok = false;
  };

  // Inhomogeneous density against the constant-shape closed form.
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double alpha = rng.next_unit();
    const double x = 4.0 * rng.next_unit() - 2.0;
    const double y = 6.0 * rng.next_unit() - 3.0;
    const double dt = 0.2 + 2.8 * rng.next_unit();
    const auto af = gsbm::PiecewiseConstantFn::constant(0.0, dt, alpha, {{0.0, 1.0}});
    const double inhom = gsbm::density_inhom(0.0, dt, x, y, af);
    const double closed = gsbm::density_const(gsbm::SkewStepKernel(alpha, dt, x), y);
    worst = std::max(worst, std::abs(inhom - closed));
  }
  record("density_oracle", worst, 1e-8);

  // Tilted-integral closed form against direct quadrature.
  worst = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double alpha = rng.next_unit();
    const double x = 2.0 * rng.next_unit() - 1.0;
    const double sigma = 0.05 + 0.6 * rng.next_unit();
    const double dt = 0.2 + 2.0 * rng.next_unit();
    const gsbm::SkewStepKernel kernel(alpha, dt, x);
    const double closed = gsbm::cond_exp_const_oracle(alpha, sigma, dt, x);
    const double lim = std::abs(x) + (sigma * dt + 12.0) * std::sqrt(dt);
    gsbm::GaussKronrodOptions opt;
    opt.rel_tol = 1e-10;
    const auto left = gsbm::gauss_kronrod(
        [&](double y) { return std::exp(sigma * y) * gsbm::density_const(kernel, y); },
        -lim, 0.0, opt);
    const auto right = gsbm::gauss_kronrod(
        [&](double y) { return std::exp(sigma * y) * gsbm::density_const(kernel, y); },
        0.0, lim, opt);
    worst = std::max(worst, std::abs(left.value + right.value - closed) / closed);
  }
  record("mgf_oracle", worst, 1e-7);

  // alpha = 1/2 collapses the forecast to the plain GBM conditional mean.
  worst = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double gs = 0.5 + 4.0 * rng.next_unit();
    const double mu = -0.3 + 0.6 * rng.next_unit();
    const double sigma = 0.05 + 0.5 * rng.next_unit();
    const double dt = 0.25 + 2.0 * rng.next_unit();
    const double s = 1.0;
    gsbm::GsbmModel model =
        gsbm::GsbmModel::constant(0.0, s + dt, mu, sigma, 0.5, 1.0);
    const double fc = gsbm::cond_exp_forecast(gsbm::ForecastQuery(s, s + dt, gs, model));
    const double exact = gs * std::exp(mu * dt);
    worst = std::max(worst, std::abs(fc - exact) / exact);
  }
  record("gbm_reduction", worst, 1e-6);

  std::cout << json{{"command", "selftest"}, {"ok", ok}, {"checks", checks}}.dump() << '\n';
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-inhomogeneous geometric skew Brownian motion toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);  // lets --seed/--config appear after the subcommand

  CommonArgs common;
  app.add_option("--seed", common.seed, "RNG seed (64-bit)");
  app.add_option("--config", common.config, "JSON config file; flags override it");

  auto* sim = app.add_subcommand("simulate", "simulate GSBM sample paths");
  std::string alpha_spec = "0:0.5", mu_spec = "0:0", sigma_spec = "0:0.2";
  double horizon = 1.0, x0 = 0.0, g0 = 1.0;
  int steps = 64, paths = 1;
  std::string sim_out = "paths.csv";
  auto* o_alpha = sim->add_option("--alpha", alpha_spec, "shape breakpoints t0:v0,t1:v1,...");
  auto* o_mu = sim->add_option("--mu", mu_spec, "drift breakpoints");
  auto* o_sigma = sim->add_option("--sigma", sigma_spec, "volatility breakpoints");
  auto* o_t = sim->add_option("--t", horizon, "time horizon");
  auto* o_steps = sim->add_option("--steps", steps, "number of grid steps");
  auto* o_paths = sim->add_option("--paths", paths, "number of paths");
  auto* o_x0 = sim->add_option("--x0", x0, "driver start state");
  auto* o_g0 = sim->add_option("--g0", g0, "initial level");
  auto* o_simout = sim->add_option("--out", sim_out, "output CSV path");

  auto* den = app.add_subcommand("density", "evaluate the transition density on a y-grid");
  std::string den_alpha = "0:0.5";
  double den_s = 0.0, den_t = 1.0, den_x = 0.0, ymin = -4.0, ymax = 4.0;
  int den_n = 801;
  std::string den_out = "density.csv";
  auto* o_dalpha = den->add_option("--alpha", den_alpha, "shape breakpoints");
  auto* o_ds = den->add_option("--s", den_s, "start time");
  auto* o_dt = den->add_option("--t", den_t, "end time");
  auto* o_dx = den->add_option("--x", den_x, "start state");
  auto* o_ymin = den->add_option("--ymin", ymin, "grid lower edge");
  auto* o_ymax = den->add_option("--ymax", ymax, "grid upper edge");
  auto* o_dn = den->add_option("--n", den_n, "grid size");
  auto* o_dout = den->add_option("--out", den_out, "output CSV path");

  auto* ing = app.add_subcommand("ingest", "read year,total_affected CSV and emit the moving-variance series");
  std::string ing_in, ing_out = "vol.csv";
  int ing_w = 12;
  auto* o_iin = ing->add_option("--input", ing_in, "raw CSV path")->required();
  auto* o_iw = ing->add_option("--w", ing_w, "moving-variance window");
  auto* o_iout = ing->add_option("--out", ing_out, "output vol CSV path");

  auto* cal = app.add_subcommand("calibrate", "rolling skew-normal MLE over a volatility series");
  std::string cal_in, cal_out = "estimates.csv", cal_polys;
  int cal_L = 12;
  auto* o_cin = cal->add_option("--input", cal_in, "vol CSV path")->required();
  auto* o_cL = cal->add_option("--L", cal_L, "rolling window length");
  auto* o_cout = cal->add_option("--out", cal_out, "estimates CSV path");
  auto* o_cpolys = cal->add_option("--polys", cal_polys, "parameter-polynomial JSON path");

  auto* fc = app.add_subcommand("forecast", "rolling calibrate-and-forecast with error report");
  std::string fc_in, fc_out = "report.json", fc_plot;
  int fc_L = 12, fc_h = 1, fc_w = 0;
  auto* o_fin = fc->add_option("--input", fc_in, "vol CSV path")->required();
  auto* o_fL = fc->add_option("--L", fc_L, "rolling window length");
  auto* o_fh = fc->add_option("--h", fc_h, "forecast horizon");
  auto* o_fw = fc->add_option("--w", fc_w, "moving-variance window recorded in the report");
  auto* o_fout = fc->add_option("--out", fc_out, "report JSON path");
  auto* o_fplot = fc->add_option("--plot", fc_plot, "plot-data CSV path");

  auto* st = app.add_subcommand("selftest", "run the built-in oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    const ConfigOverlay cfg(common.config);
    cfg.apply(app.get_option_no_throw("--seed"), "", "seed", common.seed);

    if (sim->parsed()) {
      cfg.apply(o_alpha, "simulate", "alpha", alpha_spec);
      cfg.apply(o_mu, "simulate", "mu", mu_spec);
      cfg.apply(o_sigma, "simulate", "sigma", sigma_spec);
      cfg.apply(o_t, "simulate", "t", horizon);
      cfg.apply(o_steps, "simulate", "steps", steps);
      cfg.apply(o_paths, "simulate", "paths", paths);
      cfg.apply(o_x0, "simulate", "x0", x0);
      cfg.apply(o_g0, "simulate", "g0", g0);
      cfg.apply(o_simout, "simulate", "out", sim_out);
      return run_simulate(common, alpha_spec, mu_spec, sigma_spec, horizon, steps, paths,
                          x0, g0, sim_out);
    }
    if (den->parsed()) {
      cfg.apply(o_dalpha, "density", "alpha", den_alpha);
      cfg.apply(o_ds, "density", "s", den_s);
      cfg.apply(o_dt, "density", "t", den_t);
      cfg.apply(o_dx, "density", "x", den_x);
      cfg.apply(o_ymin, "density", "ymin", ymin);
      cfg.apply(o_ymax, "density", "ymax", ymax);
      cfg.apply(o_dn, "density", "n", den_n);
      cfg.apply(o_dout, "density", "out", den_out);
      return run_density(den_alpha, den_s, den_t, den_x, ymin, ymax, den_n, den_out);
    }
    if (ing->parsed()) {
      cfg.apply(o_iin, "ingest", "input", ing_in);
      cfg.apply(o_iw, "ingest", "w", ing_w);
      cfg.apply(o_iout, "ingest", "out", ing_out);
      return run_ingest(ing_in, ing_w, ing_out);
    }
    if (cal->parsed()) {
      cfg.apply(o_cin, "calibrate", "input", cal_in);
      cfg.apply(o_cL, "calibrate", "L", cal_L);
      cfg.apply(o_cout, "calibrate", "out", cal_out);
      cfg.apply(o_cpolys, "calibrate", "polys", cal_polys);
      return run_calibrate(cal_in, cal_L, cal_out, cal_polys);
    }
    if (fc->parsed()) {
      cfg.apply(o_fin, "forecast", "input", fc_in);
      cfg.apply(o_fL, "forecast", "L", fc_L);
      cfg.apply(o_fh, "forecast", "h", fc_h);
      cfg.apply(o_fw, "forecast", "w", fc_w);
      cfg.apply(o_fout, "forecast", "out", fc_out);
      cfg.apply(o_fplot, "forecast", "plot", fc_plot);
      return run_forecast(fc_in, fc_L, fc_h, fc_w, fc_out, fc_plot);
    }
    if (st->parsed()) return run_selftest(common.seed);
  } catch (const gsbm::DomainError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const gsbm::IngestError& e) {
    std::cerr << "ingestion error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const gsbm::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const gsbm::FitError& e) {
    std::cerr << "fit error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const gsbm::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}
