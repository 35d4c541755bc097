#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trendmax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown on malformed input text (carries 1-based row index when known).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& msg, int row = -1)
      : std::runtime_error(row > 0 ? msg + " (row " + std::to_string(row) + ")"
                                   : msg),
        row_(row) {}
  int row() const { return row_; }

private:
  int row_;
};

// Thrown when data violate a documented invariant.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numerical routine cannot meet its contract
// (non-convergence, singular information, integration budget exhausted).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Link { logit, identity, log };
enum class PseudoRule { none, add1, add2 };
enum class Scaling { arithmetic, ordinal, logarithmic };
enum class Alternative { greater, less, two_sided };
enum class WilliamsWeights { equal, sized };

// Joint-covariance convention for the max-test.
//   reference: model-based variances, Williams rows as averaged pairwise
//              comparisons sharing one column of the correlation matrix
//              (matches the published R pipeline's output).
//   sandwich:  uniform I^-1 (S'S) I^-1 for variances and covariances.
enum class CovMode { reference, sandwich };

const char* to_string(Link link);
const char* to_string(PseudoRule rule);
const char* to_string(Scaling scaling);
const char* to_string(Alternative alt);
const char* to_string(WilliamsWeights w);
const char* to_string(CovMode mode);

struct Group {
  double dose = 0.0;     // administered dose, nonnegative
  double events = 0.0;   // tumor count y_i
  double at_risk = 0.0;  // n_i; real-valued so poly-k adjusted sizes fit
};

// 2-by-k contingency table: control plus dose groups, sorted by dose.
class GroupedTable {
public:
  explicit GroupedTable(std::vector<Group> groups);

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  const Group& operator[](std::size_t i) const { return groups_[i]; }

  Vector doses() const;
  Vector events() const;
  Vector at_risk() const;
  bool integral_counts() const;

private:
  std::vector<Group> groups_;
};

struct AnimalRecord {
  double dose = 0.0;
  bool tumor = false;
  double death_time = 0.0;  // t_ij, in study-time units
};

// Per-animal data; t_max is the observed study length max_j t_ij.
class AnimalDataset {
public:
  explicit AnimalDataset(std::vector<AnimalRecord> records,
                         std::optional<double> t_max_override = std::nullopt);

  const std::vector<AnimalRecord>& records() const { return records_; }
  double t_max() const { return t_max_; }
  const std::vector<double>& dose_levels() const { return dose_levels_; }

private:
  std::vector<AnimalRecord> records_;
  std::vector<double> dose_levels_;
  double t_max_ = 0.0;
};

struct MvnOptions {
  double abs_tol = 1e-4;
  std::uint64_t seed = 42;
  int shifts = 128;
  int start_points = 1024;
  int max_points = 1 << 20;  // per shift
};

struct AnalysisConfig {
  Link link = Link::logit;
  PseudoRule pseudo = PseudoRule::add2;
  std::vector<Scaling> scalings = {Scaling::arithmetic, Scaling::ordinal,
                                   Scaling::logarithmic};
  bool include_williams = true;
  WilliamsWeights williams_weights = WilliamsWeights::equal;
  Alternative alternative = Alternative::greater;
  std::vector<double> polyk_exponents;  // empty = crude analysis
  double confidence_level = 0.95;
  CovMode cov_mode = CovMode::reference;
  std::optional<double> log_zero_dose;  // explicit substitute for dose 0
  MvnOptions mvn;

  void validate() const;
};

// Add-2 adds one pseudo tumor and one pseudo non-tumor per group;
// Add-1 adds half of each. Requires integral counts.
GroupedTable apply_pseudo_counts(const GroupedTable& table, PseudoRule rule);

}  // namespace trendmax
