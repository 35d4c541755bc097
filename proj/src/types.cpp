#include "trendmax/types.hpp"

#include <algorithm>
#include <cmath>

namespace trendmax {

const char* to_string(Link link) {
  switch (link) {
    case Link::logit: return "logit";
    case Link::identity: return "identity";
    case Link::log: return "log";
  }
  return "?";
}

const char* to_string(PseudoRule rule) {
  switch (rule) {
    case PseudoRule::none: return "none";
    case PseudoRule::add1: return "add1";
    case PseudoRule::add2: return "add2";
  }
  return "?";
}

const char* to_string(Scaling scaling) {
  switch (scaling) {
    case Scaling::arithmetic: return "arithmetic";
    case Scaling::ordinal: return "ordinal";
    case Scaling::logarithmic: return "logarithmic";
  }
  return "?";
}

const char* to_string(Alternative alt) {
  switch (alt) {
    case Alternative::greater: return "greater";
    case Alternative::less: return "less";
    case Alternative::two_sided: return "two-sided";
  }
  return "?";
}

const char* to_string(WilliamsWeights w) {
  return w == WilliamsWeights::equal ? "equal" : "sized";
}

const char* to_string(CovMode mode) {
  return mode == CovMode::reference ? "reference" : "sandwich";
}

GroupedTable::GroupedTable(std::vector<Group> groups)
    : groups_(std::move(groups)) {
  if (groups_.size() < 2)
    throw ValidationError("need at least 2 dose groups, got " +
                          std::to_string(groups_.size()));
  std::stable_sort(groups_.begin(), groups_.end(),
                   [](const Group& a, const Group& b) { return a.dose < b.dose; });
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const Group& g = groups_[i];
    if (!(g.dose >= 0.0))
      throw ValidationError("dose must be nonnegative");
    if (i > 0 && !(groups_[i - 1].dose < g.dose))
      throw ValidationError("dose values must be pairwise distinct");
    if (!(g.at_risk > 0.0))
      throw ValidationError("at_risk must be positive");
    if (g.events < 0.0 || g.events > g.at_risk)
      throw ValidationError("events must lie in [0, at_risk]");
  }
}

Vector GroupedTable::doses() const {
  Vector v(groups_.size());
  for (std::size_t i = 0; i < groups_.size(); ++i) v[i] = groups_[i].dose;
  return v;
}

Vector GroupedTable::events() const {
  Vector v(groups_.size());
  for (std::size_t i = 0; i < groups_.size(); ++i) v[i] = groups_[i].events;
  return v;
}

Vector GroupedTable::at_risk() const {
  Vector v(groups_.size());
  for (std::size_t i = 0; i < groups_.size(); ++i) v[i] = groups_[i].at_risk;
  return v;
}

bool GroupedTable::integral_counts() const {
  for (const Group& g : groups_) {
    if (std::abs(g.events - std::round(g.events)) > 1e-9) return false;
    if (std::abs(g.at_risk - std::round(g.at_risk)) > 1e-9) return false;
  }
  return true;
}

AnimalDataset::AnimalDataset(std::vector<AnimalRecord> records,
                             std::optional<double> t_max_override)
    : records_(std::move(records)) {
  if (records_.empty()) throw ValidationError("animal dataset is empty");
  for (const AnimalRecord& r : records_) {
    if (!(r.death_time > 0.0))
      throw ValidationError("death_time must be positive");
    if (!(r.dose >= 0.0)) throw ValidationError("dose must be nonnegative");
    t_max_ = std::max(t_max_, r.death_time);
    if (std::find(dose_levels_.begin(), dose_levels_.end(), r.dose) ==
        dose_levels_.end())
      dose_levels_.push_back(r.dose);
  }
  std::sort(dose_levels_.begin(), dose_levels_.end());
  if (dose_levels_.size() < 2)
    throw ValidationError("need at least 2 dose levels, got " +
                          std::to_string(dose_levels_.size()));
  if (t_max_override) {
    if (*t_max_override < t_max_)
      throw ValidationError("t_max override below observed maximum death time");
    t_max_ = *t_max_override;
  }
}

void AnalysisConfig::validate() const {
  if (scalings.empty() && !include_williams)
    throw ValidationError("family is empty: no scalings and Williams disabled");
  if (!(confidence_level > 0.0 && confidence_level < 1.0))
    throw ValidationError("confidence_level must lie in (0,1)");
  if (!(mvn.abs_tol > 0.0))
    throw ValidationError("mvn_abs_tol must be positive");
  for (double k : polyk_exponents)
    if (!(k > 0.0)) throw ValidationError("poly-k exponent must be positive");
  if (!polyk_exponents.empty() && pseudo != PseudoRule::none)
    throw ValidationError("poly-k weighting and pseudo counts are mutually exclusive");
}

GroupedTable apply_pseudo_counts(const GroupedTable& table, PseudoRule rule) {
  if (rule == PseudoRule::none) return table;
  if (!table.integral_counts())
    throw ValidationError(
        "pseudo counts are defined for integer tables only (poly-k adjusted "
        "tables cannot be pseudo-count corrected)");
  const double add = rule == PseudoRule::add2 ? 1.0 : 0.5;
  std::vector<Group> out = table.groups();
  for (Group& g : out) {
    g.events += add;
    g.at_risk += 2.0 * add;
  }
  return GroupedTable(std::move(out));
}

}  // namespace trendmax
