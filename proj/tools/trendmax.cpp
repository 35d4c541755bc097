#include "trendmax/combine.hpp"
#include "trendmax/csv.hpp"
#include "trendmax/mmm.hpp"
#include "trendmax/polyk.hpp"
#include "trendmax/report.hpp"
#include "trendmax/scalings.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace trendmax;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
  std::string input;
  std::string link = "logit";
  std::string pseudo = "add2";
  std::string scalings = "ari,ord,log";
  bool williams = true;
  std::string williams_weights = "equal";
  std::string alternative = "greater";
  double level = 0.95;
  std::string format = "text";
  std::uint64_t seed = 42;
  bool seed_given = false;
  double mvn_tol = 1e-4;
  double log_zero_dose = 0.0;
  bool log_zero_given = false;
  std::string cov_mode = "reference";
  std::vector<double> polyk;
  std::vector<std::string> endpoints;
};

void add_common_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--input", o.input, "input CSV path")->required();
  cmd->add_option("--link", o.link, "logit|identity|log (default logit)")
      ->check(CLI::IsMember({"logit", "identity", "log"}));
  cmd->add_option("--alternative", o.alternative,
                  "greater|less|two-sided (default greater)")
      ->check(CLI::IsMember({"greater", "less", "two-sided"}));
  cmd->add_option("--level", o.level, "simultaneous confidence level (default 0.95)");
  cmd->add_option("--format", o.format, "text|json (default text)")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", o.seed, "integrator seed (default 42; flag beats TRENDMAX_SEED)")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--mvn-tol", o.mvn_tol, "absolute MVN integration tolerance (default 1e-4)");
  cmd->add_option("--scalings", o.scalings,
                  "comma list of ari,ord,log dose scores (default all)");
  cmd->add_flag("--williams,!--no-williams", o.williams,
                "include Williams-type contrasts (default on)");
  cmd->add_option("--williams-weights", o.williams_weights,
                  "equal|sized pooling weights (default equal)")
      ->check(CLI::IsMember({"equal", "sized"}));
  cmd->add_option("--log-zero-dose", o.log_zero_dose,
                  "explicit substitute for dose 0 on the log scale")
      ->each([&o](const std::string&) { o.log_zero_given = true; });
  cmd->add_option("--cov-mode", o.cov_mode,
                  "reference|sandwich joint-covariance convention (default reference)")
      ->check(CLI::IsMember({"reference", "sandwich"}));
}

AnalysisConfig make_config(const CliOptions& o) {
  AnalysisConfig c;
  c.link = o.link == "logit" ? Link::logit
           : o.link == "log" ? Link::log
                             : Link::identity;
  c.pseudo = o.pseudo == "none"   ? PseudoRule::none
             : o.pseudo == "add1" ? PseudoRule::add1
                                  : PseudoRule::add2;
  c.scalings.clear();
  std::stringstream ss(o.scalings);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "ari" || tok == "arithmetic")
      c.scalings.push_back(Scaling::arithmetic);
    else if (tok == "ord" || tok == "ordinal")
      c.scalings.push_back(Scaling::ordinal);
    else if (tok == "log" || tok == "logarithmic" || tok == "arilog")
      c.scalings.push_back(Scaling::logarithmic);
    else if (!tok.empty())
      throw ValidationError("unknown scaling '" + tok + "'");
  }
  c.include_williams = o.williams;
  c.williams_weights = o.williams_weights == "sized" ? WilliamsWeights::sized
                                                     : WilliamsWeights::equal;
  c.alternative = o.alternative == "greater" ? Alternative::greater
                  : o.alternative == "less"  ? Alternative::less
                                             : Alternative::two_sided;
  c.confidence_level = o.level;
  c.polyk_exponents = o.polyk;
  c.cov_mode = o.cov_mode == "sandwich" ? CovMode::sandwich : CovMode::reference;
  if (o.log_zero_given) c.log_zero_dose = o.log_zero_dose;
  c.mvn.abs_tol = o.mvn_tol;
  c.mvn.seed = o.seed;
  if (!o.seed_given) {
    if (const char* env = std::getenv("TRENDMAX_SEED"))
      c.mvn.seed = std::strtoull(env, nullptr, 10);
  }
  c.validate();
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Report& report, const std::string& format) {
  if (format == "json")
    std::cout << render_json(report);
  else
    std::cout << render_text(report);
}

double min_unadjusted_p(const JointInference& inf) {
  double p = 1.0;
  for (Eigen::Index i = 0; i < inf.statistics.size(); ++i) {
    double t = inf.statistics[i];
    if (inf.alternative == Alternative::less) t = -t;
    double pi = inf.alternative == Alternative::two_sided
                    ? 2.0 * (1.0 - normal_cdf(std::abs(t)))
                    : 1.0 - normal_cdf(t);
    p = std::min(p, pi);
  }
  return p;
}

void maybe_warn_conservatism(Report& report, const JointInference& inf) {
  const double p_adj_min = inf.adjusted_p.minCoeff();
  if (p_adj_min > 50.0 * min_unadjusted_p(inf))
    report.warnings.push_back("low-correlation combination, interpret with care");
}

int run_trend(const CliOptions& o) {
  const AnalysisConfig config = make_config(o);
  const GroupedTable table = parse_grouped_csv(slurp(o.input));
  const MarginalModelFamily family = build_family(table, config);
  const JointInference inference = test_family(family, config);
  Report report = build_report(inference, config);
  emit(report, o.format);
  return 0;
}

int run_polyk(const CliOptions& o) {
  CliOptions adj = o;
  adj.pseudo = "none";
  const AnalysisConfig config = make_config(adj);
  if (config.polyk_exponents.empty())
    throw ValidationError("polyk requires at least one exponent via --k");
  const AnimalDataset data = parse_animal_csv(slurp(o.input));

  std::vector<MarginalModelFamily> families;
  std::vector<std::string> labels;
  for (double k : config.polyk_exponents) {
    families.push_back(build_family(data, config, k));
    std::ostringstream lab;
    lab << "poly-" << k;
    labels.push_back(lab.str());
  }

  Report report;
  if (families.size() == 1) {
    const JointInference inference = test_family(families[0], config);
    report = build_report(inference, config);
  } else {
    const CombinedFamily combined = combine(families, labels);
    const JointInference inference = test_family(combined.family, config);
    report = build_report(inference, config);
    maybe_warn_conservatism(report, inference);
  }
  emit(report, o.format);
  return 0;
}

int run_multi(const CliOptions& o) {
  const AnalysisConfig config = make_config(o);
  const WideAnimalData data = parse_wide_animal_csv(slurp(o.input));

  std::vector<std::string> endpoints =
      o.endpoints.empty() ? data.endpoint_names : o.endpoints;
  for (const std::string& e : endpoints)
    if (!data.endpoints.count(e))
      throw ValidationError("endpoint '" + e + "' not present in input");
  if (endpoints.size() < 2)
    throw ValidationError("multi requires at least 2 endpoints");

  const bool polyk_mode = !config.polyk_exponents.empty();
  if (polyk_mode && data.death_times.empty())
    throw ValidationError("poly-k weighting requires a death_time column");
  if (polyk_mode && config.pseudo != PseudoRule::none)
    throw ValidationError("poly-k weighting and pseudo counts are mutually exclusive");

  // Shared dose levels and group index per animal.
  std::vector<double> levels = data.doses;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.size() < 2) throw ValidationError("need at least 2 dose levels");
  const std::size_t N = data.doses.size();
  const std::size_t G = levels.size();
  std::vector<int> group(N);
  for (std::size_t i = 0; i < N; ++i)
    group[i] = static_cast<int>(
        std::lower_bound(levels.begin(), levels.end(), data.doses[i]) -
        levels.begin());
  const double t_max =
      data.death_times.empty()
          ? 1.0
          : *std::max_element(data.death_times.begin(), data.death_times.end());

  // Pseudo counts for crude analysis enter as shared pseudo animals:
  // per group one all-endpoint tumor unit and one tumor-free unit.
  const double pseudo_w = config.pseudo == PseudoRule::add2   ? 1.0
                          : config.pseudo == PseudoRule::add1 ? 0.5
                                                              : 0.0;

  AnalysisConfig fam_config = config;
  fam_config.pseudo = PseudoRule::none;  // handled via pseudo units here

  std::vector<MarginalModelFamily> families;
  std::vector<std::string> labels;
  auto build_endpoint_units = [&](const std::string& endpoint, double k,
                                  bool weighted) {
    const std::vector<int>& tumor = data.endpoints.at(endpoint);
    const std::size_t extra = pseudo_w > 0.0 ? 2 * G : 0;
    UnitData units;
    units.doses = Eigen::Map<const Vector>(levels.data(),
                                           static_cast<Eigen::Index>(G));
    units.response.resize(static_cast<Eigen::Index>(N + extra));
    units.weight.resize(static_cast<Eigen::Index>(N + extra));
    units.group.resize(N + extra);
    units.group_at_risk = Vector::Zero(static_cast<Eigen::Index>(G));
    for (std::size_t i = 0; i < N; ++i) {
      units.response[static_cast<Eigen::Index>(i)] = tumor[i];
      double w = 1.0;
      if (weighted && !tumor[i])
        w = std::pow(data.death_times[i] / t_max, k);
      units.weight[static_cast<Eigen::Index>(i)] = w;
      units.group[i] = group[i];
      units.group_at_risk[group[i]] += w;
    }
    for (std::size_t g = 0; g < G && pseudo_w > 0.0; ++g) {
      const std::size_t base = N + 2 * g;
      units.response[static_cast<Eigen::Index>(base)] = 1.0;
      units.response[static_cast<Eigen::Index>(base + 1)] = 0.0;
      units.weight[static_cast<Eigen::Index>(base)] = pseudo_w;
      units.weight[static_cast<Eigen::Index>(base + 1)] = pseudo_w;
      units.group[base] = static_cast<int>(g);
      units.group[base + 1] = static_cast<int>(g);
      units.group_at_risk[static_cast<Eigen::Index>(g)] += 2.0 * pseudo_w;
    }
    return units;
  };

  for (const std::string& endpoint : endpoints) {
    if (polyk_mode) {
      for (double k : config.polyk_exponents) {
        families.push_back(
            build_family(build_endpoint_units(endpoint, k, true), fam_config));
        std::ostringstream lab;
        lab << endpoint << " poly-" << k;
        labels.push_back(lab.str());
      }
    } else {
      families.push_back(
          build_family(build_endpoint_units(endpoint, 0.0, false), fam_config));
      labels.push_back(endpoint);
    }
  }

  const CombinedFamily combined = combine(families, labels);
  const JointInference inference = test_family(combined.family, config);
  Report report = build_report(inference, config);
  maybe_warn_conservatism(report, inference);
  emit(report, o.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum trend test for tumor incidences in long-term bioassays"};
  app.require_subcommand(1);

  CliOptions topt, popt, mopt;

  CLI::App* trend = app.add_subcommand(
      "trend", "max-test over dose scalings and Williams contrasts on a 2-by-k table");
  add_common_flags(trend, topt);
  trend->add_option("--pseudo", topt.pseudo, "none|add1|add2 (default add2)")
      ->check(CLI::IsMember({"none", "add1", "add2"}));

  CLI::App* polyk = app.add_subcommand(
      "polyk", "mortality-adjusted max-test on per-animal data");
  add_common_flags(polyk, popt);
  polyk->add_option("--k", popt.polyk, "poly-k exponents, e.g. 3 or 3,6")
      ->required()
      ->delimiter(',');

  CLI::App* multi = app.add_subcommand(
      "multi", "joint max-test across several endpoint columns");
  add_common_flags(multi, mopt);
  multi->add_option("--pseudo", mopt.pseudo, "none|add1|add2 (default add2)")
      ->check(CLI::IsMember({"none", "add1", "add2"}));
  multi->add_option("--endpoints", mopt.endpoints,
                    "endpoint columns to analyze (default: all)")
      ->delimiter(',');
  multi->add_option("--polyk", mopt.polyk, "poly-k exponents (needs death_time)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (trend->parsed()) return run_trend(topt);
    if (polyk->parsed()) return run_polyk(popt);
    if (multi->parsed()) return run_multi(mopt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
