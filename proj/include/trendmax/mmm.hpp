#pragma once

#include "trendmax/mvn.hpp"
#include "trendmax/scalings.hpp"
#include "trendmax/types.hpp"

#include <string>
#include <vector>

namespace trendmax {

// Stacked covariance of all model parameters across the family's distinct
// fitted models: Cov(theta_m, theta_l) = I_m^-1 (S_m' S_l) I_l^-1.
// Row/column order follows first appearance of each model in the family.
struct StackedCovariance {
  Matrix cov;
  std::vector<std::string> labels;           // one per stacked parameter
  std::vector<std::pair<int, int>> spans;    // (offset, size) per distinct model
};

StackedCovariance joint_covariance(const MarginalModelFamily& family);

struct JointInference {
  std::vector<std::string> labels;
  std::vector<std::string> kinds;
  Vector estimates;      // c'theta per member, linear-predictor scale
  Vector std_errors;
  Vector statistics;     // signed per the alternative
  Matrix correlation;
  Vector adjusted_p;
  double critical_value = 0.0;
  Vector lower_bounds;   // -inf for alternative == less
  Vector upper_bounds;   // +inf for alternative == greater
  Alternative alternative = Alternative::greater;
  double mvn_error_estimate = 0.0;
};

JointInference test_family(const MarginalModelFamily& family,
                           const AnalysisConfig& config);

}  // namespace trendmax
