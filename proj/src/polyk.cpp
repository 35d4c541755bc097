#include "trendmax/polyk.hpp"

#include <algorithm>
#include <cmath>

namespace trendmax {

PolykWeights polyk_weights(const AnimalDataset& data, double k) {
  if (!(k > 0.0)) throw ValidationError("poly-k exponent must be positive");
  const auto& records = data.records();
  const auto& levels = data.dose_levels();
  const double t_max = data.t_max();

  PolykWeights out;
  out.exponent = k;
  out.weights.resize(static_cast<Eigen::Index>(records.size()));
  out.adjusted_sizes = Vector::Zero(static_cast<Eigen::Index>(levels.size()));
  out.tumor_counts = Vector::Zero(static_cast<Eigen::Index>(levels.size()));

  for (std::size_t i = 0; i < records.size(); ++i) {
    const AnimalRecord& r = records[i];
    const double w =
        r.tumor ? 1.0 : std::pow(r.death_time / t_max, k);
    out.weights[static_cast<Eigen::Index>(i)] = w;
    const auto it = std::lower_bound(levels.begin(), levels.end(), r.dose);
    const Eigen::Index g = static_cast<Eigen::Index>(it - levels.begin());
    out.adjusted_sizes[g] += w;
    if (r.tumor) out.tumor_counts[g] += 1.0;
  }

  out.adjusted_rates.resize(out.adjusted_sizes.size());
  for (Eigen::Index g = 0; g < out.adjusted_sizes.size(); ++g) {
    if (!(out.adjusted_sizes[g] > 0.0))
      throw NumericalError("adjusted sample size n* is zero in group " +
                           std::to_string(g));
    out.adjusted_rates[g] = out.tumor_counts[g] / out.adjusted_sizes[g];
  }
  return out;
}

GroupedTable adjusted_table(const AnimalDataset& data, double k) {
  const PolykWeights pw = polyk_weights(data, k);
  const auto& levels = data.dose_levels();
  std::vector<Group> groups;
  groups.reserve(levels.size());
  for (std::size_t g = 0; g < levels.size(); ++g) {
    Group grp;
    grp.dose = levels[g];
    grp.events = pw.tumor_counts[static_cast<Eigen::Index>(g)];
    grp.at_risk = pw.adjusted_sizes[static_cast<Eigen::Index>(g)];
    groups.push_back(grp);
  }
  return GroupedTable(std::move(groups));
}

}  // namespace trendmax
