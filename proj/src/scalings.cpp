#include "trendmax/scalings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trendmax {

namespace {

std::string format_dose(double d) {
  std::ostringstream os;
  os.precision(10);
  os << d;
  return os.str();
}

std::string scaling_label(Scaling tag) { return to_string(tag); }

}  // namespace

DoseScaling make_scaling(const Vector& doses, Scaling tag,
                         std::optional<double> zero_substitute) {
  const Eigen::Index k1 = doses.size();
  if (k1 < 2) throw ValidationError("need at least 2 dose levels");
  for (Eigen::Index i = 1; i < k1; ++i)
    if (!(doses[i] > doses[i - 1]))
      throw ValidationError("doses must be strictly increasing");

  DoseScaling out;
  out.tag = tag;
  switch (tag) {
    case Scaling::arithmetic:
      out.values = doses;
      break;
    case Scaling::ordinal:
      out.values = Vector::LinSpaced(k1, 0.0, static_cast<double>(k1 - 1));
      break;
    case Scaling::logarithmic: {
      Vector d = doses;
      if (d[0] <= 0.0) {
        double sub;
        if (zero_substitute) {
          sub = *zero_substitute;
          if (!(sub > 0.0 && sub < d[1]))
            throw ValidationError(
                "log zero-dose substitute must lie in (0, lowest nonzero dose)");
        } else {
          if (k1 < 3)
            throw ValidationError(
                "logarithmic scaling with a zero dose needs at least 2 nonzero "
                "doses");
          sub = d[1] * d[1] / d[2];  // one log spacing below the lowest nonzero
        }
        d[0] = sub;
      }
      out.values = d.array().log();
      break;
    }
  }
  return out;
}

ContrastMatrix williams_contrasts(const Vector& sizes, const Vector& doses) {
  const Eigen::Index k1 = sizes.size();
  if (k1 < 2 || doses.size() != k1)
    throw ValidationError("williams_contrasts needs k+1 >= 2 matching sizes/doses");
  const Eigen::Index k = k1 - 1;
  ContrastMatrix out;
  out.rows = Matrix::Zero(k, k1);
  for (Eigen::Index r = 1; r <= k; ++r) {
    double total = 0.0;
    for (Eigen::Index i = k1 - r; i < k1; ++i) total += sizes[i];
    out.rows(r - 1, 0) = -1.0;
    for (Eigen::Index i = k1 - r; i < k1; ++i)
      out.rows(r - 1, i) = sizes[i] / total;

    std::ostringstream label;
    label << "C: " << format_dose(doses[0]) << "-";
    if (r == 1) {
      label << format_dose(doses[k1 - 1]);
    } else {
      label << "(";
      for (Eigen::Index i = k1 - r; i < k1; ++i) {
        if (i > k1 - r) label << "+";
        label << format_dose(doses[i]);
      }
      label << ")/" << r;
    }
    out.labels.push_back(label.str());
  }
  return out;
}

UnitData expand_table(const GroupedTable& table) {
  UnitData out;
  const std::size_t G = table.size();
  out.doses = table.doses();
  out.group_at_risk = table.at_risk();

  std::vector<double> y, w;
  std::vector<int> g;
  auto push = [&](int grp, double resp, double count) {
    const double whole = std::floor(count + 1e-12);
    for (double c = 0.0; c < whole; c += 1.0) {
      y.push_back(resp);
      w.push_back(1.0);
      g.push_back(grp);
    }
    const double frac = count - whole;
    if (frac > 1e-12) {
      y.push_back(resp);
      w.push_back(frac);
      g.push_back(grp);
    }
  };
  for (std::size_t i = 0; i < G; ++i) {
    const Group& grp = table[static_cast<std::size_t>(i)];
    push(static_cast<int>(i), 1.0, grp.events);
    push(static_cast<int>(i), 0.0, grp.at_risk - grp.events);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(y.size());
  out.response = Eigen::Map<Vector>(y.data(), n);
  out.weight = Eigen::Map<Vector>(w.data(), n);
  out.group = std::move(g);
  return out;
}

UnitData animal_units(const AnimalDataset& data, const Vector& weights) {
  const auto& records = data.records();
  if (weights.size() != static_cast<Eigen::Index>(records.size()))
    throw ValidationError("weights not aligned with animal records");
  const auto& levels = data.dose_levels();

  UnitData out;
  out.doses = Eigen::Map<const Vector>(levels.data(),
                                       static_cast<Eigen::Index>(levels.size()));
  out.response.resize(static_cast<Eigen::Index>(records.size()));
  out.weight = weights;
  out.group.resize(records.size());
  out.group_at_risk = Vector::Zero(out.doses.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto it =
        std::lower_bound(levels.begin(), levels.end(), records[i].dose);
    const int g = static_cast<int>(it - levels.begin());
    out.group[i] = g;
    out.response[static_cast<Eigen::Index>(i)] = records[i].tumor ? 1.0 : 0.0;
    out.group_at_risk[g] += weights[static_cast<Eigen::Index>(i)];
  }
  return out;
}

MarginalModelFamily build_family(const UnitData& units,
                                 const AnalysisConfig& config) {
  config.validate();
  const Eigen::Index n = units.response.size();
  const Eigen::Index G = units.doses.size();
  const Vector trials = Vector::Ones(n);

  MarginalModelFamily family;
  family.n_units = static_cast<int>(n);
  family.n_groups = static_cast<int>(G);
  family.cov_mode = config.cov_mode;

  for (Scaling tag : config.scalings) {
    const DoseScaling sc =
        make_scaling(units.doses, tag, config.log_zero_dose);
    DesignMatrix design;
    design.X.resize(n, 2);
    design.X.col(0).setOnes();
    for (Eigen::Index u = 0; u < n; ++u)
      design.X(u, 1) = sc.values[units.group[static_cast<std::size_t>(u)]];
    design.labels = {"(intercept)", scaling_label(tag)};

    FamilyMember member;
    member.label = scaling_label(tag);
    member.kind = "covariate";
    try {
      auto model = std::make_shared<FittedModel>(
          fit_binomial(design, units.response, trials, units.weight,
                       config.link));
      member.functional = Vector::Zero(2);
      member.functional[1] = 1.0;
      member.estimate = model->coefficients[1];
      member.influence = model->score_matrix * model->vcov_model.col(1);
      member.sandwich_var = member.influence.squaredNorm();
      member.se = config.cov_mode == CovMode::reference
                      ? std::sqrt(model->vcov_model(1, 1))
                      : std::sqrt(member.sandwich_var);
      member.model = std::move(model);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " [member " + member.label +
                           "]");
    }
    family.members.push_back(std::move(member));
  }

  if (config.include_williams) {
    DesignMatrix design;
    design.X = Matrix::Zero(n, G);
    for (Eigen::Index u = 0; u < n; ++u)
      design.X(u, units.group[static_cast<std::size_t>(u)]) = 1.0;
    for (Eigen::Index g = 0; g < G; ++g)
      design.labels.push_back("group " + std::to_string(g));

    std::shared_ptr<FittedModel> model;
    try {
      model = std::make_shared<FittedModel>(fit_binomial(
          design, units.response, trials, units.weight, config.link));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " [member dose-factor]");
    }
    const Vector v = model->vcov_model.diagonal();

    const Vector sizes = config.williams_weights == WilliamsWeights::sized
                             ? units.group_at_risk
                             : Vector::Ones(G);
    const ContrastMatrix contrasts = williams_contrasts(sizes, units.doses);

    // Shared influence column: the highest-dose comparison.
    Vector c_high = Vector::Zero(G);
    c_high[0] = -1.0;
    c_high[G - 1] = 1.0;
    const Vector shared_influence =
        model->score_matrix * (model->vcov_model * c_high);

    for (Eigen::Index r = 0; r < contrasts.rows.rows(); ++r) {
      const Vector c = contrasts.rows.row(r);
      FamilyMember member;
      member.label = contrasts.labels[static_cast<std::size_t>(r)];
      member.kind = "contrast";
      member.functional = c;
      member.model = model;
      member.estimate = c.dot(model->coefficients);
      if (config.cov_mode == CovMode::reference) {
        // Pooled comparison as the average of pairwise comparisons: the
        // variance is the matching average of pairwise variances.
        double var = 0.0;
        for (Eigen::Index i = 1; i < G; ++i)
          if (c[i] > 0.0) var += c[i] * (v[0] + v[i]);
        member.se = std::sqrt(var);
        member.influence = shared_influence;
        member.sandwich_var = shared_influence.squaredNorm();
      } else {
        member.influence = model->score_matrix * (model->vcov_model * c);
        member.sandwich_var = member.influence.squaredNorm();
        member.se = std::sqrt(member.sandwich_var);
      }
      family.members.push_back(std::move(member));
    }
  }
  return family;
}

MarginalModelFamily build_family(const GroupedTable& table,
                                 const AnalysisConfig& config) {
  const GroupedTable adjusted = apply_pseudo_counts(table, config.pseudo);
  return build_family(expand_table(adjusted), config);
}

MarginalModelFamily build_family(const AnimalDataset& data,
                                 const AnalysisConfig& config,
                                 double polyk_exponent) {
  if (config.pseudo != PseudoRule::none)
    throw ValidationError(
        "poly-k weighting and pseudo counts are mutually exclusive");
  const PolykWeights pw = polyk_weights(data, polyk_exponent);
  return build_family(animal_units(data, pw.weights), config);
}

}  // namespace trendmax
