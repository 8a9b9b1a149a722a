#include "reachquant/reachability.hpp"

#include <cmath>
#include <stdexcept>

namespace reachquant {

double beta_inflation(const ReachParams& p, bool zero_norm_limit) {
  if (!(p.T > 0.0)) throw std::invalid_argument("beta_inflation: T must be positive");
  if (p.mu < 0.0) throw std::invalid_argument("beta_inflation: mu must be nonnegative");
  if (p.mu == 0.0) return 0.0;

  const double a = induced_inf_norm(p.A);
  if (a == 0.0) {
    if (!zero_norm_limit)
      throw std::domain_error(
          "beta_inflation: |A| = 0 is degenerate; set zero_norm_limit for the T*mu limit");
    return p.T * p.mu;
  }
  return std::exp(p.T * a) / a * p.mu;
}

Zonotope terminal_reach_overapprox(const ReachParams& p, const Zonotope& x0,
                                   bool zero_norm_limit) {
  if (x0.dim() != p.A.rows())
    throw std::invalid_argument("terminal_reach_overapprox: dimension mismatch");

  const Mat lambda = mat_exp(p.A, p.T);
  Zonotope mapped = linear_map(lambda, x0);
  const double beta = beta_inflation(p, zero_norm_limit);
  if (beta == 0.0) return mapped;
  return minkowski_sum(mapped, to_zonotope(Hyperrect::cube(Vec(x0.dim(), 0.0), beta)));
}

double input_error_inflation(double a_norm, double T, double u_b, double kh_norm,
                             double est_error_bound, GrowthBound bound, bool zero_norm_limit) {
  if (!(T > 0.0)) throw std::invalid_argument("input_error_inflation: T must be positive");
  if (a_norm < 0.0 || u_b < 0.0 || kh_norm < 0.0 || est_error_bound < 0.0)
    throw std::invalid_argument("input_error_inflation: arguments must be nonnegative");

  const double mu = u_b + kh_norm * est_error_bound;
  if (mu == 0.0) return 0.0;

  if (a_norm == 0.0) {
    if (!zero_norm_limit)
      throw std::domain_error(
          "input_error_inflation: |A| = 0 is degenerate; set zero_norm_limit for the T*mu limit");
    // Limit of the integrated kernel; the exponential variant has no finite limit.
    return T * mu;
  }
  const double kernel =
      bound == GrowthBound::Integral ? std::expm1(a_norm * T) : std::exp(a_norm * T);
  return kernel / a_norm * mu;
}

}  // namespace reachquant
