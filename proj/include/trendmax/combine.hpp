#pragma once

#include "trendmax/scalings.hpp"

#include <string>
#include <vector>

namespace trendmax {

// Several families over the same observational units merged into one joint
// max-test; cross-block covariance comes from the same per-unit score
// products as within-block.
struct CombinedFamily {
  std::vector<std::pair<std::string, int>> blocks;  // label, member count
  MarginalModelFamily family;
};

CombinedFamily combine(const std::vector<MarginalModelFamily>& families,
                       const std::vector<std::string>& labels);

}  // namespace trendmax
