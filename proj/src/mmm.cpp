#include "trendmax/mmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trendmax {

StackedCovariance joint_covariance(const MarginalModelFamily& family) {
  if (family.members.empty()) throw ValidationError("empty family");

  std::vector<const FittedModel*> models;
  for (const FamilyMember& m : family.members) {
    if (!m.model) throw ValidationError("family member without fitted model");
    if (m.model->n_units != family.n_units)
      throw ValidationError("family members do not share observational units");
    if (std::find(models.begin(), models.end(), m.model.get()) == models.end())
      models.push_back(m.model.get());
  }

  StackedCovariance out;
  std::vector<Matrix> bread;  // I_m^-1 per model
  int total = 0;
  for (const FittedModel* m : models) {
    const int p = static_cast<int>(m->coefficients.size());
    out.spans.emplace_back(total, p);
    total += p;
    bread.push_back(m->vcov_model);
    for (int j = 0; j < p; ++j)
      out.labels.push_back("m" + std::to_string(bread.size() - 1) + ":b" +
                           std::to_string(j));
  }
  out.cov.resize(total, total);
  for (std::size_t a = 0; a < models.size(); ++a) {
    for (std::size_t b = a; b < models.size(); ++b) {
      const Matrix meat =
          models[a]->score_matrix.transpose() * models[b]->score_matrix;
      const Matrix block = bread[a] * meat * bread[b];
      out.cov.block(out.spans[a].first, out.spans[b].first, out.spans[a].second,
                    out.spans[b].second) = block;
      if (a != b)
        out.cov.block(out.spans[b].first, out.spans[a].first,
                      out.spans[b].second, out.spans[a].second) =
            block.transpose();
    }
  }
  return out;
}

JointInference test_family(const MarginalModelFamily& family,
                           const AnalysisConfig& config) {
  const std::size_t M = family.members.size();
  if (M == 0) throw ValidationError("empty family");

  JointInference out;
  out.alternative = config.alternative;
  out.estimates.resize(static_cast<Eigen::Index>(M));
  out.std_errors.resize(static_cast<Eigen::Index>(M));
  out.statistics.resize(static_cast<Eigen::Index>(M));
  for (std::size_t i = 0; i < M; ++i) {
    const FamilyMember& m = family.members[i];
    out.labels.push_back(m.label);
    out.kinds.push_back(m.kind);
    out.estimates[static_cast<Eigen::Index>(i)] = m.estimate;
    if (!(m.se > 0.0))
      throw NumericalError("degenerate variance for member " + m.label);
    out.std_errors[static_cast<Eigen::Index>(i)] = m.se;
    out.statistics[static_cast<Eigen::Index>(i)] = m.estimate / m.se;
  }

  // Correlation from the per-unit influence functions. Members built in
  // reference mode share one influence column per factor block, which makes
  // those entries exactly 1.
  out.correlation.resize(static_cast<Eigen::Index>(M),
                         static_cast<Eigen::Index>(M));
  Vector norms(static_cast<Eigen::Index>(M));
  for (std::size_t i = 0; i < M; ++i) {
    norms[static_cast<Eigen::Index>(i)] =
        std::sqrt(family.members[i].sandwich_var);
    if (!(norms[static_cast<Eigen::Index>(i)] > 0.0))
      throw NumericalError("zero influence norm for member " +
                           family.members[i].label);
  }
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = i; j < M; ++j) {
      const double rho =
          family.members[i].influence.dot(family.members[j].influence) /
          (norms[static_cast<Eigen::Index>(i)] *
           norms[static_cast<Eigen::Index>(j)]);
      const double clipped = std::max(-1.0, std::min(1.0, rho));
      out.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          clipped;
      out.correlation(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          clipped;
    }
  }

  // Signed statistics: the max-test works on the "greater" scale.
  Vector work = out.statistics;
  if (config.alternative == Alternative::less) work = -work;
  if (config.alternative == Alternative::two_sided) work = work.cwiseAbs();

  out.adjusted_p.resize(static_cast<Eigen::Index>(M));
  double worst_error = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double t = work[static_cast<Eigen::Index>(i)];
    MvnResult r;
    if (config.alternative == Alternative::two_sided)
      r = mvn_rectangle(-t, t, out.correlation, config.mvn);
    else
      r = mvn_equicoordinate(t, out.correlation, config.mvn);
    if (!r.converged)
      throw NumericalError(
          "MVN integration failed to reach the requested tolerance (achieved " +
          std::to_string(r.error_estimate) + ")");
    worst_error = std::max(worst_error, r.error_estimate);
    out.adjusted_p[static_cast<Eigen::Index>(i)] =
        std::min(1.0, std::max(0.0, 1.0 - r.value));
  }
  out.mvn_error_estimate = worst_error;

  out.critical_value =
      equicoordinate_quantile(config.confidence_level, out.correlation,
                              config.mvn,
                              config.alternative == Alternative::two_sided);

  const double inf = std::numeric_limits<double>::infinity();
  out.lower_bounds.resize(static_cast<Eigen::Index>(M));
  out.upper_bounds.resize(static_cast<Eigen::Index>(M));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(M); ++i) {
    switch (config.alternative) {
      case Alternative::greater:
        out.lower_bounds[i] = out.estimates[i] - out.critical_value * out.std_errors[i];
        out.upper_bounds[i] = inf;
        break;
      case Alternative::less:
        out.lower_bounds[i] = -inf;
        out.upper_bounds[i] = out.estimates[i] + out.critical_value * out.std_errors[i];
        break;
      case Alternative::two_sided:
        out.lower_bounds[i] = out.estimates[i] - out.critical_value * out.std_errors[i];
        out.upper_bounds[i] = out.estimates[i] + out.critical_value * out.std_errors[i];
        break;
    }
  }
  return out;
}

}  // namespace trendmax
