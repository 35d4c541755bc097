#include "trendmax/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

namespace trendmax {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_number(const std::string& field, int row, const std::string& col) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError("empty value in column '" + col + "'", row);
  try {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size())
      throw ParseError("malformed number '" + t + "' in column '" + col + "'",
                       row);
    if (!std::isfinite(v))
      throw ParseError("non-finite value in column '" + col + "'", row);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + t + "' in column '" + col + "'",
                     row);
  }
}

// Reads non-comment, non-blank lines and tracks the original row index.
std::vector<std::pair<int, std::vector<std::string>>> read_rows(
    std::istream& in) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    rows.emplace_back(lineno, split_fields(t));
  }
  return rows;
}

void expect_header(const std::vector<std::string>& got,
                   const std::vector<std::string>& want, int row) {
  if (got.size() != want.size())
    throw ParseError("bad header: expected " + std::to_string(want.size()) +
                         " columns, got " + std::to_string(got.size()),
                     row);
  for (std::size_t i = 0; i < want.size(); ++i) {
    std::string g = got[i];
    std::transform(g.begin(), g.end(), g.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (g != want[i])
      throw ParseError("bad header: expected column '" + want[i] + "', got '" +
                           got[i] + "'",
                       row);
  }
}

}  // namespace

GroupedTable parse_grouped_csv(std::istream& in) {
  auto rows = read_rows(in);
  if (rows.empty()) throw ParseError("empty input: expected header dose,events,n");
  expect_header(rows[0].second, {"dose", "events", "n"}, rows[0].first);
  std::vector<Group> groups;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& [lineno, fields] = rows[i];
    if (fields.size() != 3)
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()),
                       lineno);
    Group g;
    g.dose = parse_number(fields[0], lineno, "dose");
    g.events = parse_number(fields[1], lineno, "events");
    g.at_risk = parse_number(fields[2], lineno, "n");
    groups.push_back(g);
  }
  return GroupedTable(std::move(groups));
}

GroupedTable parse_grouped_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_grouped_csv(in);
}

std::string serialize_grouped_csv(const GroupedTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "dose,events,n\n";
  for (const Group& g : table.groups())
    out << g.dose << ',' << g.events << ',' << g.at_risk << '\n';
  return out.str();
}

AnimalDataset parse_animal_csv(std::istream& in) {
  auto rows = read_rows(in);
  if (rows.empty())
    throw ParseError("empty input: expected header dose,tumor,death_time");
  expect_header(rows[0].second, {"dose", "tumor", "death_time"}, rows[0].first);
  if (rows.size() == 1) throw ValidationError("animal dataset has no rows");
  std::vector<AnimalRecord> records;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& [lineno, fields] = rows[i];
    if (fields.size() != 3)
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()),
                       lineno);
    AnimalRecord r;
    r.dose = parse_number(fields[0], lineno, "dose");
    const double tumor = parse_number(fields[1], lineno, "tumor");
    if (tumor != 0.0 && tumor != 1.0)
      throw ValidationError("tumor must be 0 or 1 (row " +
                            std::to_string(lineno) + ")");
    r.tumor = tumor == 1.0;
    r.death_time = parse_number(fields[2], lineno, "death_time");
    if (!(r.death_time > 0.0))
      throw ValidationError("death_time must be positive (row " +
                            std::to_string(lineno) + ")");
    records.push_back(r);
  }
  return AnimalDataset(std::move(records));
}

AnimalDataset parse_animal_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_animal_csv(in);
}

WideAnimalData parse_wide_animal_csv(std::istream& in) {
  auto rows = read_rows(in);
  if (rows.empty())
    throw ParseError("empty input: expected header id,dose[,death_time],<endpoints>");
  const auto& header = rows[0].second;
  if (header.size() < 3)
    throw ParseError("need at least id, dose and one endpoint column",
                     rows[0].first);
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  if (lower(header[0]) != "id" || lower(header[1]) != "dose")
    throw ParseError("header must start with id,dose", rows[0].first);

  WideAnimalData data;
  std::size_t first_endpoint = 2;
  bool has_death = header.size() > 2 && lower(header[2]) == "death_time";
  if (has_death) first_endpoint = 3;
  if (header.size() <= first_endpoint)
    throw ParseError("no endpoint columns found", rows[0].first);
  for (std::size_t j = first_endpoint; j < header.size(); ++j) {
    if (header[j].empty())
      throw ParseError("empty endpoint column name", rows[0].first);
    data.endpoint_names.push_back(header[j]);
    data.endpoints[header[j]] = {};
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& [lineno, fields] = rows[i];
    if (fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(fields.size()),
                       lineno);
    data.ids.push_back(fields[0]);
    data.doses.push_back(parse_number(fields[1], lineno, "dose"));
    if (has_death) {
      double t = parse_number(fields[2], lineno, "death_time");
      if (!(t > 0.0))
        throw ValidationError("death_time must be positive (row " +
                              std::to_string(lineno) + ")");
      data.death_times.push_back(t);
    }
    for (std::size_t j = first_endpoint; j < header.size(); ++j) {
      const double v = parse_number(fields[j], lineno, header[j]);
      if (v != 0.0 && v != 1.0)
        throw ValidationError("endpoint '" + header[j] +
                              "' must be 0 or 1 (row " + std::to_string(lineno) +
                              ")");
      data.endpoints[header[j]].push_back(static_cast<int>(v));
    }
  }
  if (data.ids.empty()) throw ValidationError("wide animal dataset has no rows");
  return data;
}

WideAnimalData parse_wide_animal_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_wide_animal_csv(in);
}

}  // namespace trendmax
