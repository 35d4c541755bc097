#include "trendmax/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace trendmax {

using nlohmann::json;

Report build_report(const JointInference& inference,
                    const AnalysisConfig& config) {
  Report report;
  report.config = config;
  report.critical_value = inference.critical_value;
  report.mvn_error = inference.mvn_error_estimate;

  const Eigen::Index M = inference.estimates.size();
  double min_p = 2.0;
  for (Eigen::Index i = 0; i < M; ++i) {
    ReportRow row;
    row.label = inference.labels[static_cast<std::size_t>(i)];
    row.kind = inference.kinds[static_cast<std::size_t>(i)];
    row.estimate = inference.estimates[i];
    row.se = inference.std_errors[i];
    row.statistic = inference.statistics[i];
    row.adjusted_p = inference.adjusted_p[i];
    row.lower = inference.lower_bounds[i];
    row.upper = inference.upper_bounds[i];
    report.rows.push_back(std::move(row));
    if (inference.adjusted_p[i] < min_p) {
      min_p = inference.adjusted_p[i];
      report.shape = inference.labels[static_cast<std::size_t>(i)];
    }
  }
  return report;
}

namespace {

std::string fmt(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

json config_json(const AnalysisConfig& c) {
  json scalings = json::array();
  for (Scaling s : c.scalings) scalings.push_back(to_string(s));
  json polyk = json::array();
  for (double k : c.polyk_exponents) polyk.push_back(k);
  return json{{"link", to_string(c.link)},
              {"pseudo", to_string(c.pseudo)},
              {"scalings", scalings},
              {"williams", c.include_williams},
              {"williams_weights", to_string(c.williams_weights)},
              {"alternative", to_string(c.alternative)},
              {"level", c.confidence_level},
              {"polyk", polyk},
              {"cov_mode", to_string(c.cov_mode)},
              {"mvn_tol", c.mvn.abs_tol},
              {"seed", c.mvn.seed}};
}

}  // namespace

std::string render_text(const Report& report) {
  const bool exp_scale =
      report.config.link == Link::logit || report.config.link == Link::log;
  const char* effect = report.config.link == Link::logit ? "odds ratio"
                       : report.config.link == Link::log ? "risk ratio"
                                                         : "risk diff";
  std::ostringstream os;
  os << "Maximum trend test (" << to_string(report.config.link)
     << " link, pseudo=" << to_string(report.config.pseudo)
     << ", alternative=" << to_string(report.config.alternative)
     << ", level=" << report.config.confidence_level << ")\n";

  std::size_t wlab = 12;
  for (const ReportRow& r : report.rows) wlab = std::max(wlab, r.label.size());

  os << std::left << std::setw(10) << "model" << std::setw(wlab + 2) << "test"
     << std::right << std::setw(10) << "estimate" << std::setw(10) << "se"
     << std::setw(8) << "stat" << std::setw(9) << "p-adj" << std::setw(10)
     << (report.config.alternative == Alternative::less ? "upper" : "lower");
  if (exp_scale) os << std::setw(12) << effect;
  os << "\n";

  for (const ReportRow& r : report.rows) {
    const double bound = report.config.alternative == Alternative::less
                             ? r.upper
                             : r.lower;
    os << std::left << std::setw(10)
       << (r.kind == "covariate" ? "covariate" : "factor") << std::setw(wlab + 2)
       << r.label << std::right << std::setw(10) << fmt(r.estimate, 3)
       << std::setw(10) << fmt(r.se, 3) << std::setw(8) << fmt(r.statistic, 2)
       << std::setw(9) << fmt(r.adjusted_p, 4) << std::setw(10) << fmt(bound, 3);
    if (exp_scale) os << std::setw(12) << fmt(std::exp(r.estimate), 3);
    os << "\n";
  }
  os << "most likely shape: " << report.shape << " (minimal adjusted p)\n";
  os << "critical value: " << fmt(report.critical_value, 4)
     << "   mvn error: " << std::scientific << std::setprecision(1)
     << report.mvn_error << "\n";
  for (const std::string& w : report.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string render_json(const Report& report) {
  json members = json::array();
  for (const ReportRow& r : report.rows) {
    json row{{"label", r.label},       {"kind", r.kind},
             {"estimate", r.estimate}, {"se", r.se},
             {"stat", r.statistic},    {"p_adj", r.adjusted_p}};
    row["lower"] = std::isinf(r.lower) ? json() : json(r.lower);
    row["upper"] = std::isinf(r.upper) ? json() : json(r.upper);
    members.push_back(std::move(row));
  }
  json doc{{"config", config_json(report.config)},
           {"members", members},
           {"shape", report.shape},
           {"critical_value", report.critical_value},
           {"warnings", report.warnings},
           {"mvn_error", report.mvn_error}};
  return doc.dump(2) + "\n";
}

}  // namespace trendmax
