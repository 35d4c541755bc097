#include "trendmax/glm.hpp"

#include <Eigen/QR>

#include <cmath>

namespace trendmax {

namespace {

constexpr double kMuFloor = 1e-10;
constexpr int kMaxIter = 50;
constexpr int kMaxHalvings = 30;

double link_eta(double mu, Link link) {
  switch (link) {
    case Link::logit: return std::log(mu / (1.0 - mu));
    case Link::identity: return mu;
    case Link::log: return std::log(mu);
  }
  return 0.0;
}

double link_inv(double eta, Link link) {
  switch (link) {
    case Link::logit: return 1.0 / (1.0 + std::exp(-eta));
    case Link::identity: return eta;
    case Link::log: return std::exp(eta);
  }
  return 0.0;
}

double dmu_deta(double mu, Link link) {
  switch (link) {
    case Link::logit: return mu * (1.0 - mu);
    case Link::identity: return 1.0;
    case Link::log: return mu;
  }
  return 0.0;
}

bool interior(const Vector& mu) {
  for (int i = 0; i < mu.size(); ++i)
    if (!(mu[i] > kMuFloor && mu[i] < 1.0 - kMuFloor)) return false;
  return true;
}

double binomial_deviance(const Vector& y, const Vector& m, const Vector& pw,
                         const Vector& mu) {
  double dev = 0.0;
  for (int i = 0; i < y.size(); ++i) {
    double d = 0.0;
    if (y[i] > 0.0) d += y[i] * std::log(y[i] / (m[i] * mu[i]));
    const double f = m[i] - y[i];
    if (f > 0.0) d += f * std::log(f / (m[i] * (1.0 - mu[i])));
    dev += 2.0 * pw[i] * d;
  }
  return dev;
}

}  // namespace

FittedModel fit_binomial(const DesignMatrix& design, const Vector& successes,
                         const Vector& trials, const Vector& prior_weights,
                         Link link) {
  const Matrix& X0 = design.X;
  const Eigen::Index n = X0.rows();
  const Eigen::Index p = X0.cols();
  if (successes.size() != n || trials.size() != n || prior_weights.size() != n)
    throw ValidationError("design/response dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(trials[i] > 0.0)) throw ValidationError("trials must be positive");
    if (successes[i] < 0.0 || successes[i] > trials[i])
      throw ValidationError("successes must lie in [0, trials]");
    if (prior_weights[i] < 0.0)
      throw ValidationError("prior weights must be nonnegative");
  }

  // Rescale columns to max-abs 1 for conditioning; map results back below.
  Vector scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double s = X0.col(j).cwiseAbs().maxCoeff();
    scale[j] = s > 0.0 ? s : 1.0;
  }
  Matrix X = X0 * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < p)
    throw NumericalError("rank-deficient design matrix (rank " +
                         std::to_string(qr.rank()) + " of " +
                         std::to_string(p) + ")");

  const Vector& y = successes;
  const Vector& m = trials;
  const Vector& pw = prior_weights;

  Vector mu = (y.array() + 0.5) / (m.array() + 1.0);
  Vector eta(n);
  for (Eigen::Index i = 0; i < n; ++i) eta[i] = link_eta(mu[i], link);

  Vector beta = Vector::Zero(p);
  bool have_beta = false;
  double dev = binomial_deviance(y, m, pw, mu);
  bool converged = false;

  for (int iter = 0; iter < kMaxIter; ++iter) {
    Vector w(n), z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = dmu_deta(mu[i], link);
      const double var = mu[i] * (1.0 - mu[i]);
      w[i] = pw[i] * m[i] * d * d / var;
      z[i] = eta[i] + (y[i] / m[i] - mu[i]) / d;
    }
    Matrix XtW = X.transpose() * w.asDiagonal();
    Matrix info = XtW * X;
    Eigen::LDLT<Matrix> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw NumericalError("singular weighted information in IRLS");
    Vector beta_new = ldlt.solve(XtW * z);

    // Step-halving keeps identity/log fits inside (0,1).
    Vector step = have_beta ? Vector(beta_new - beta) : Vector::Zero(p);
    double frac = 1.0;
    Vector cand = beta_new;
    int halvings = 0;
    while (true) {
      Vector eta_c = X * cand;
      Vector mu_c(n);
      bool ok = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        mu_c[i] = link_inv(eta_c[i], link);
        if (!(mu_c[i] > kMuFloor && mu_c[i] < 1.0 - kMuFloor)) ok = false;
      }
      if (ok) {
        const double dev_c = binomial_deviance(y, m, pw, mu_c);
        eta = eta_c;
        mu = mu_c;
        const bool done =
            std::abs(dev_c - dev) < 1e-10 * (std::abs(dev_c) + 0.1);
        dev = dev_c;
        beta = cand;
        have_beta = true;
        if (done) converged = true;
        break;
      }
      if (!have_beta || ++halvings > kMaxHalvings)
        throw NumericalError(
            "link boundary: fitted probabilities escaped (0,1) under the " +
            std::string(to_string(link)) + " link");
      frac *= 0.5;
      cand = beta + frac * step;
    }
    if (converged) break;
  }

  FittedModel out;
  out.link = link;
  out.n_units = static_cast<int>(n);
  out.converged = converged;
  out.deviance = dev;
  if (!converged)
    throw NumericalError("IRLS did not converge in " +
                         std::to_string(kMaxIter) + " iterations");

  Vector w(n), r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = dmu_deta(mu[i], link);
    const double var = mu[i] * (1.0 - mu[i]);
    w[i] = pw[i] * m[i] * d * d / var;
    r[i] = pw[i] * m[i] * (y[i] / m[i] - mu[i]) * d / var;
  }
  Matrix info = X.transpose() * w.asDiagonal() * X;
  Eigen::LDLT<Matrix> ldlt(info);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw NumericalError("singular information at the MLE");

  // Map back to the caller's covariate scale: beta_orig = beta / s,
  // score_orig = score * s, vcov_orig = S^-1 vcov S^-1.
  out.coefficients = beta.cwiseQuotient(scale);
  Matrix vcov = ldlt.solve(Matrix::Identity(p, p));
  out.vcov_model =
      scale.cwiseInverse().asDiagonal() * vcov * scale.cwiseInverse().asDiagonal();
  out.info = scale.asDiagonal() * info * scale.asDiagonal();
  out.score_matrix = X0.array().colwise() * r.array();
  out.fitted = mu;
  return out;
}

double wald_statistic(const FittedModel& model, const Vector& weight_vector,
                      const Matrix& vcov, Alternative alternative) {
  if (weight_vector.size() != model.coefficients.size())
    throw ValidationError("contrast length does not match parameter count");
  if (vcov.rows() != weight_vector.size() || vcov.cols() != weight_vector.size())
    throw ValidationError("vcov not conformable with contrast");
  const double est = weight_vector.dot(model.coefficients);
  const double var = weight_vector.dot(vcov * weight_vector);
  if (!(var > 0.0)) throw NumericalError("degenerate variance in Wald statistic");
  double t = est / std::sqrt(var);
  if (alternative == Alternative::two_sided) t = std::abs(t);
  return t;
}

}  // namespace trendmax
