#pragma once

#include "trendmax/mmm.hpp"
#include "trendmax/types.hpp"

#include <string>
#include <vector>

namespace trendmax {

struct ReportRow {
  std::string label;
  std::string kind;  // "covariate" or "contrast"
  double estimate = 0.0;
  double se = 0.0;
  double statistic = 0.0;
  double adjusted_p = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct Report {
  AnalysisConfig config;
  std::vector<ReportRow> rows;  // covariate scalings first, then contrasts
  std::string shape;            // label of the minimal adjusted p
  double critical_value = 0.0;
  double mvn_error = 0.0;
  std::vector<std::string> warnings;
};

Report build_report(const JointInference& inference,
                    const AnalysisConfig& config);

std::string render_text(const Report& report);
std::string render_json(const Report& report);

}  // namespace trendmax
