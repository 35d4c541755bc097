#pragma once

#include "trendmax/types.hpp"

#include <string>
#include <vector>

namespace trendmax {

struct DesignMatrix {
  Matrix X;  // units x parameters
  std::vector<std::string> labels;
};

// Binomial GLM fit. Coefficients and derived quantities are reported on the
// caller's covariate scale (columns are rescaled internally for conditioning).
struct FittedModel {
  Vector coefficients;
  Matrix vcov_model;    // (X'WX)^-1 at the MLE
  Matrix info;          // X'WX at the MLE
  Matrix score_matrix;  // per-unit score contributions, units x parameters
  Vector fitted;        // mu per unit
  int n_units = 0;
  Link link = Link::logit;
  bool converged = false;
  double deviance = 0.0;
};

// Maximum (quasi-)likelihood via IRLS with prior weights. successes/trials
// may be non-integer. Identity and log links use step-halving to keep fitted
// means inside (0,1).
FittedModel fit_binomial(const DesignMatrix& design, const Vector& successes,
                         const Vector& trials, const Vector& prior_weights,
                         Link link);

// Studentized linear functional t = c'theta / sqrt(c' vcov c).
// For alternative == less the caller works with -t; two_sided uses |t|.
double wald_statistic(const FittedModel& model, const Vector& weight_vector,
                      const Matrix& vcov, Alternative alternative);

// Weighted binomial log-likelihood kernel and its gradient at an arbitrary
// parameter value (not just the MLE).
double binomial_loglik(const DesignMatrix& design, const Vector& successes,
                       const Vector& trials, const Vector& prior_weights,
                       Link link, const Vector& theta);
Vector binomial_score(const DesignMatrix& design, const Vector& successes,
                      const Vector& trials, const Vector& prior_weights,
                      Link link, const Vector& theta);

}  // namespace trendmax
