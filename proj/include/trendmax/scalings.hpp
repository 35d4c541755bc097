#pragma once

#include "trendmax/glm.hpp"
#include "trendmax/polyk.hpp"
#include "trendmax/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace trendmax {

struct DoseScaling {
  Scaling tag = Scaling::arithmetic;
  Vector values;  // one score per dose level, strictly increasing
};

// arithmetic: doses as given. ordinal: 0..k. logarithmic: log doses, with a
// zero control replaced by d1^2/d2 (one log spacing below the lowest nonzero
// dose) or by an explicit substitute.
DoseScaling make_scaling(const Vector& doses, Scaling tag,
                         std::optional<double> zero_substitute = std::nullopt);

struct ContrastMatrix {
  Matrix rows;  // contrasts x groups, each row sums to 0
  std::vector<std::string> labels;
};

// Williams-type rows: row r compares control with the pooled mean of the top
// r dose groups, highest-dose-only first. Weights over the pooled groups are
// proportional to `sizes` (pass ones for the unweighted variant).
ContrastMatrix williams_contrasts(const Vector& sizes, const Vector& doses);

// Observational units: one weighted Bernoulli observation per row.
// Grouped tables are expanded (pseudo counts become pseudo units) so that
// per-unit score contributions are meaningful for every family member.
struct UnitData {
  Vector response;       // 0/1 per unit
  Vector weight;         // prior weight per unit
  std::vector<int> group;  // dose-level index per unit
  Vector doses;          // dose value per level, ascending
  Vector group_at_risk;  // sum of weights per level
};

UnitData expand_table(const GroupedTable& table);
UnitData animal_units(const AnimalDataset& data, const Vector& weights);

struct FamilyMember {
  std::string label;
  std::string kind;  // "covariate" or "contrast"
  double estimate = 0.0;
  double se = 0.0;          // per the configured covariance mode
  double sandwich_var = 0.0;
  Vector influence;         // per-unit influence on the tested functional
  std::shared_ptr<const FittedModel> model;
  Vector functional;        // coefficient selector / contrast row over model parameters
};

struct MarginalModelFamily {
  std::vector<FamilyMember> members;
  int n_units = 0;
  int n_groups = 0;
  CovMode cov_mode = CovMode::reference;
};

// Fits one GLM per dose scaling (intercept + scaled dose) and, if requested,
// the dose-factor model with Williams rows attached; all on the same units.
MarginalModelFamily build_family(const UnitData& units,
                                 const AnalysisConfig& config);

// Convenience entry points mirroring the two data sources.
MarginalModelFamily build_family(const GroupedTable& table,
                                 const AnalysisConfig& config);
MarginalModelFamily build_family(const AnimalDataset& data,
                                 const AnalysisConfig& config,
                                 double polyk_exponent);

}  // namespace trendmax
