#include "gsbm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace gsbm {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

json metrics_to_json(const ErrorMetrics& m) {
  return json{{"rmse", m.rmse},
              {"nrmse_range", m.nrmse_range},
              {"nrmse_mean", m.nrmse_mean},
              {"degenerate_range", m.degenerate_range}};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pc_csv(std::ostream& os, const PiecewiseConstantFn& fn) {
  os << "t_start,value\n";
  for (Eigen::Index i = 0; i < fn.values().size(); ++i)
    os << format_double(fn.grid()[i]) << ',' << format_double(fn.values()(i)) << '\n';
  os << format_double(fn.grid().end()) << ','
     << format_double(fn.values()(fn.values().size() - 1)) << '\n';
}

PiecewiseConstantFn read_pc_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t_start,value")
    throw IngestError("pc csv: expected header 't_start,value'", {1});
  std::vector<double> ts, vs;
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    double t = 0.0, v = 0.0;
    if (fields.size() != 2) throw IngestError("pc csv: malformed row", {line_no});
    try {
      t = std::stod(fields[0]);
      v = std::stod(fields[1]);
    } catch (...) {
      throw IngestError("pc csv: malformed row", {line_no});
    }
    ts.push_back(t);
    vs.push_back(v);
  }
  if (ts.size() < 2) throw IngestError("pc csv: need at least 2 rows", {line_no});
  vs.pop_back();  // trailing sentinel row only carries the grid end
  return PiecewiseConstantFn(
      TimeGrid(Eigen::Map<const Eigen::VectorXd>(ts.data(),
                                                 static_cast<Eigen::Index>(ts.size()))),
      Eigen::Map<const Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size())));
}

std::string cubic_to_json(const CubicPoly& p) {
  return json(p.a).dump();
}

CubicPoly cubic_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_array() || j.size() != 4)
    throw IngestError("cubic json: expected an array of 4 coefficients", {});
  CubicPoly p;
  for (std::size_t i = 0; i < 4; ++i) p.a[i] = j[i].get<double>();
  return p;
}

void write_paths_csv(std::ostream& os, const std::vector<GsbmPath>& paths,
                     const std::vector<std::string>& header_comments) {
  for (const auto& c : header_comments) os << "# " << c << '\n';
  os << "path,t,x,g\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    for (Eigen::Index i = 0; i < path.grid.size(); ++i)
      os << p << ',' << format_double(path.grid[i]) << ','
         << format_double(path.driver.states(i)) << ','
         << format_double(path.levels(i)) << '\n';
  }
}

void write_density_csv(std::ostream& os, const std::vector<double>& ys,
                       const std::vector<double>& ps) {
  os << "y,p\n";
  for (std::size_t i = 0; i < ys.size(); ++i)
    os << format_double(ys[i]) << ',' << format_double(ps[i]) << '\n';
}

void write_vol_csv(std::ostream& os, const VolSeries& vol) {
  os << "# w=" << vol.window_w << '\n';
  os << "t,V\n";
  for (Eigen::Index i = 0; i < vol.size(); ++i) {
    os << format_double(vol.index(i)) << ',';
    if (std::isfinite(vol.values(i))) os << format_double(vol.values(i));
    os << '\n';
  }
}

VolSeries read_vol_csv(std::istream& is) {
  std::string line;
  int w = 0;
  long line_no = 0;
  bool header_seen = false;
  std::vector<double> ts, vs;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("w=");
      if (pos != std::string::npos) {
        try {
          w = std::stoi(line.substr(pos + 2));
        } catch (...) {
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != "t,V") throw IngestError("vol csv: expected header 't,V'", {line_no});
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw IngestError("vol csv: malformed row", {line_no});
    double t = 0.0;
    try {
      t = std::stod(fields[0]);
    } catch (...) {
      throw IngestError("vol csv: malformed row", {line_no});
    }
    double v = std::numeric_limits<double>::quiet_NaN();
    if (!fields[1].empty()) {
      try {
        v = std::stod(fields[1]);
      } catch (...) {
        throw IngestError("vol csv: malformed row", {line_no});
      }
      if (!(v > 0.0)) throw IngestError("vol csv: V must be positive", {line_no});
    }
    ts.push_back(t);
    vs.push_back(v);
  }
  if (ts.empty()) throw IngestError("vol csv: no data rows", {line_no});

  VolSeries vol;
  vol.window_w = w;
  vol.index = Eigen::Map<const Eigen::VectorXd>(ts.data(),
                                                static_cast<Eigen::Index>(ts.size()));
  vol.values = Eigen::Map<const Eigen::VectorXd>(vs.data(),
                                                 static_cast<Eigen::Index>(vs.size()));
  return vol;
}

VolSeries read_vol_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  return read_vol_csv(in);
}

void write_estimates_csv(std::ostream& os, const std::vector<WindowEstimates>& est) {
  os << "t,mu_hat,sigma_hat,alpha_hat,loglik,flag\n";
  for (const auto& e : est) {
    os << format_double(e.t) << ',';
    if (e.usable())
      os << format_double(e.mu_hat) << ',' << format_double(e.sigma_hat) << ','
         << format_double(e.alpha_hat) << ',' << format_double(e.loglik);
    else
      os << ",,," << (std::isfinite(e.loglik) ? format_double(e.loglik) : "");
    os << ',' << to_string(e.flag) << '\n';
  }
}

std::string param_polys_to_json(const ParamPolys& polys) {
  return json{{"mu", polys.mu.a}, {"sigma", polys.sigma.a}, {"alpha", polys.alpha.a}}
      .dump();
}

std::string report_to_json(const ForecastReport& report) {
  json preds = json::array();
  for (const auto& r : report.predictions)
    preds.push_back({{"t", r.t}, {"v_hat", r.v_hat}, {"v_real", r.v_real}});
  json j{{"h", report.h},
         {"L", report.L},
         {"w", report.w},
         {"predictions", preds},
         {"rmse", report.metrics.rmse},
         {"nrmse_range", report.metrics.nrmse_range},
         {"nrmse_mean", report.metrics.nrmse_mean},
         {"gaps", report.gaps},
         {"baseline", report.baseline ? metrics_to_json(*report.baseline) : json()}};
  return j.dump(2);
}

void write_plot_csv(std::ostream& os, const ForecastReport& report) {
  os << "t,v_real,v_hat,rel_error\n";
  for (const auto& r : report.predictions) {
    const double target = r.t + report.h;
    const double rel = r.v_real != 0.0 ? (r.v_hat - r.v_real) / r.v_real : 0.0;
    os << format_double(target) << ',' << format_double(r.v_real) << ','
       << format_double(r.v_hat) << ',' << format_double(rel) << '\n';
  }
}

}  // namespace gsbm
