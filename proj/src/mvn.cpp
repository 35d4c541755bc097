#include "trendmax/mvn.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace trendmax {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// AS241 (Wichura), double-precision branch.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw ValidationError("normal_quantile requires p in [0,1]");
  }
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

namespace {

// sqrt of the first primes; Richtmyer/Kronecker lattice generators.
std::vector<double> richtmyer_generators(int dim) {
  std::vector<double> gen;
  gen.reserve(static_cast<std::size_t>(dim));
  int candidate = 2;
  while (static_cast<int>(gen.size()) < dim) {
    bool prime = true;
    for (int d = 2; d * d <= candidate; ++d)
      if (candidate % d == 0) {
        prime = false;
        break;
      }
    if (prime) gen.push_back(std::sqrt(static_cast<double>(candidate)));
    ++candidate;
  }
  return gen;
}

Matrix repaired_cholesky(const Matrix& R) {
  const Eigen::Index M = R.rows();
  if (R.cols() != M) throw ValidationError("correlation matrix must be square");
  for (Eigen::Index i = 0; i < M; ++i)
    if (std::abs(R(i, i) - 1.0) > 1e-8)
      throw ValidationError("correlation matrix must have unit diagonal");

  Eigen::SelfAdjointEigenSolver<Matrix> es(R);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-8)
    throw NumericalError("correlation matrix is not positive semidefinite "
                         "(smallest eigenvalue " +
                         std::to_string(min_eig) + ")");
  // Clip small/negative eigenvalues, rescale to unit diagonal.
  Vector ev = es.eigenvalues().cwiseMax(1e-10);
  Matrix Rc = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  Vector d = Rc.diagonal().cwiseSqrt();
  Rc = d.cwiseInverse().asDiagonal() * Rc * d.cwiseInverse().asDiagonal();

  Eigen::LLT<Matrix> llt(Rc + 1e-12 * Matrix::Identity(M, M));
  double ridge = 1e-12;
  while (llt.info() != Eigen::Success && ridge < 1e-6) {
    ridge *= 100.0;
    llt.compute(Rc + ridge * Matrix::Identity(M, M));
  }
  if (llt.info() != Eigen::Success)
    throw NumericalError("Cholesky factorization failed after repair");
  return llt.matrixL();
}

// One randomized-lattice estimate stream per shift; extensible in the point
// count so the budget can be doubled without recomputation.
struct ShiftState {
  std::vector<double> shift;
  double sum = 0.0;
  long count = 0;
};

double genz_point(const Matrix& L, double lo, double hi, bool has_lo,
                  const std::vector<double>& u) {
  const Eigen::Index M = L.rows();
  const double d0 = has_lo ? normal_cdf(lo / L(0, 0)) : 0.0;
  const double e0 = normal_cdf(hi / L(0, 0));
  double f = e0 - d0;
  if (M == 1) return f;
  std::vector<double> y(static_cast<std::size_t>(M - 1));
  double d = d0, e = e0;
  for (Eigen::Index i = 1; i < M; ++i) {
    const double t = d + u[static_cast<std::size_t>(i - 1)] * (e - d);
    const double clipped = std::min(1.0 - 1e-16, std::max(1e-16, t));
    y[static_cast<std::size_t>(i - 1)] = normal_quantile(clipped);
    double mu = 0.0;
    for (Eigen::Index j = 0; j < i; ++j)
      mu += L(i, j) * y[static_cast<std::size_t>(j)];
    d = has_lo ? normal_cdf((lo - mu) / L(i, i)) : 0.0;
    e = normal_cdf((hi - mu) / L(i, i));
    if (e < d) e = d;
    f *= (e - d);
    if (f <= 0.0) return 0.0;
  }
  return f;
}

MvnResult integrate(double lo, double hi, bool has_lo, const Matrix& R,
                    const MvnOptions& opts) {
  const Eigen::Index M = R.rows();
  if (M == 1) {
    MvnResult out;
    out.value = normal_cdf(hi) - (has_lo ? normal_cdf(lo) : 0.0);
    out.error_estimate = 0.0;
    out.converged = true;
    return out;
  }
  const Matrix L = repaired_cholesky(R);
  const std::vector<double> gen = richtmyer_generators(static_cast<int>(M - 1));

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ShiftState> shifts(static_cast<std::size_t>(opts.shifts));
  for (auto& s : shifts) {
    s.shift.resize(static_cast<std::size_t>(M - 1));
    for (double& x : s.shift) x = unif(rng);
  }

  // 99% confidence on the shift-mean spread.
  constexpr double kZ99 = 2.5758293035489004;
  std::vector<double> u(static_cast<std::size_t>(M - 1));
  MvnResult out;
  long target = opts.start_points;
  while (true) {
    for (auto& s : shifts) {
      for (long j = s.count; j < target; ++j) {
        for (std::size_t d = 0; d < u.size(); ++d) {
          const double v = std::fmod((j + 1) * gen[d] + s.shift[d], 1.0);
          u[d] = std::abs(2.0 * v - 1.0);  // baker's transform
        }
        s.sum += genz_point(L, lo, hi, has_lo, u);
      }
      s.count = target;
    }
    double mean = 0.0;
    for (const auto& s : shifts) mean += s.sum / s.count;
    mean /= shifts.size();
    double var = 0.0;
    for (const auto& s : shifts) {
      const double d = s.sum / s.count - mean;
      var += d * d;
    }
    var /= shifts.size() * (shifts.size() - 1.0);
    out.value = std::min(1.0, std::max(0.0, mean));
    out.error_estimate = kZ99 * std::sqrt(var);
    if (out.error_estimate <= opts.abs_tol) {
      out.converged = true;
      return out;
    }
    if (target >= opts.max_points) return out;
    target *= 2;
  }
}

}  // namespace

MvnResult mvn_equicoordinate(double b, const Matrix& R, const MvnOptions& opts) {
  return integrate(0.0, b, false, R, opts);
}

MvnResult mvn_rectangle(double lower, double upper, const Matrix& R,
                        const MvnOptions& opts) {
  if (!(lower <= upper)) throw ValidationError("rectangle bounds out of order");
  return integrate(lower, upper, true, R, opts);
}

double equicoordinate_quantile(double level, const Matrix& R,
                               const MvnOptions& opts, bool two_sided) {
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("quantile level must lie in (0,1)");
  auto prob = [&](double b) {
    return two_sided ? mvn_rectangle(-b, b, R, opts).value
                     : mvn_equicoordinate(b, R, opts).value;
  };
  double lo = 0.0, hi = 10.0;
  if (prob(hi) < level)
    throw NumericalError("quantile bracket [0,10] too small");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (prob(mid) < level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace trendmax
