#pragma once

#include "trendmax/types.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace trendmax {

// Grouped table, header `dose,events,n`. Lines starting with '#' are ignored.
GroupedTable parse_grouped_csv(std::istream& in);
GroupedTable parse_grouped_csv(const std::string& text);

std::string serialize_grouped_csv(const GroupedTable& table);

// Per-animal data, header `dose,tumor,death_time`, tumor in {0,1}.
AnimalDataset parse_animal_csv(std::istream& in);
AnimalDataset parse_animal_csv(const std::string& text);

// Wide per-animal data for joint multi-endpoint analysis.
// Header: `id,dose[,death_time],<endpoint columns...>`; endpoints are 0/1.
struct WideAnimalData {
  std::vector<std::string> ids;
  std::vector<double> doses;
  std::vector<double> death_times;  // empty when the column is absent
  std::vector<std::string> endpoint_names;
  std::map<std::string, std::vector<int>> endpoints;
};

WideAnimalData parse_wide_animal_csv(std::istream& in);
WideAnimalData parse_wide_animal_csv(const std::string& text);

}  // namespace trendmax
