#pragma once

#include "trendmax/types.hpp"

namespace trendmax {

// Standard normal CDF and quantile (Wichura AS241-grade accuracy).
double normal_cdf(double x);
double normal_quantile(double p);

struct MvnResult {
  double value = 0.0;
  double error_estimate = 0.0;  // 99%-confidence absolute error
  bool converged = false;
};

// P(Z_1 <= b, ..., Z_M <= b) for Z ~ N(0, R) by separation-of-variables
// quasi-Monte Carlo (randomized Richtmyer lattice). Deterministic given
// (b, R, seed, tol). Near-PSD correlation matrices (smallest eigenvalue
// above -1e-8) are repaired by eigenvalue clipping; anything worse throws.
MvnResult mvn_equicoordinate(double b, const Matrix& R, const MvnOptions& opts);

// P(lower <= Z_i <= upper for all i); the two-sided kernel.
MvnResult mvn_rectangle(double lower, double upper, const Matrix& R,
                        const MvnOptions& opts);

// Solves P(...) = level for b by bisection on [0, 10] to 1e-6.
// two_sided selects the symmetric-rectangle probability.
double equicoordinate_quantile(double level, const Matrix& R,
                               const MvnOptions& opts, bool two_sided);

}  // namespace trendmax
