#include "trendmax/combine.hpp"

namespace trendmax {

CombinedFamily combine(const std::vector<MarginalModelFamily>& families,
                       const std::vector<std::string>& labels) {
  if (families.size() < 2)
    throw ValidationError("combine needs at least 2 families");
  if (labels.size() != families.size())
    throw ValidationError("one label per family required");

  CombinedFamily out;
  out.family.n_units = families[0].n_units;
  out.family.n_groups = families[0].n_groups;
  out.family.cov_mode = families[0].cov_mode;
  for (std::size_t b = 0; b < families.size(); ++b) {
    const MarginalModelFamily& f = families[b];
    if (f.n_units != out.family.n_units)
      throw ValidationError("families do not share observational units (" +
                            std::to_string(f.n_units) + " vs " +
                            std::to_string(out.family.n_units) + ")");
    if (f.cov_mode != out.family.cov_mode)
      throw ValidationError("families use different covariance modes");
    out.blocks.emplace_back(labels[b], static_cast<int>(f.members.size()));
    for (const FamilyMember& m : f.members) {
      FamilyMember copy = m;
      copy.label = labels[b] + ": " + m.label;
      out.family.members.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace trendmax
