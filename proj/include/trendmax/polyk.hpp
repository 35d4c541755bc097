#pragma once

#include "trendmax/types.hpp"

namespace trendmax {

// Mortality-adjustment weights: tumor-bearing animals keep weight 1,
// tumor-free animals get (t_ij / t_max)^k. Adjusted sizes n_i* = sum_j w_ij.
struct PolykWeights {
  double exponent = 3.0;
  Vector weights;         // aligned with AnimalDataset::records()
  Vector adjusted_sizes;  // n_i* per dose level (ascending dose)
  Vector adjusted_rates;  // p_i* = y_i / n_i*
  Vector tumor_counts;    // y_i per dose level
};

PolykWeights polyk_weights(const AnimalDataset& data, double k);

// Grouped summary with events = y_i and at_risk = n_i* (for reporting;
// model fitting stays at per-animal granularity).
GroupedTable adjusted_table(const AnimalDataset& data, double k);

}  // namespace trendmax
