#pragma once

#include "reachquant/numerics.hpp"
#include "reachquant/sets.hpp"

namespace reachquant {

/// One propagation interval: dynamics matrix, interval length T, and a bound
/// mu on the infinity norm of the additive input.
struct ReachParams {
  Mat A;
  double T = 0.0;
  double mu = 0.0;
};

/// Constant used when inflating a propagated set to absorb additive inputs
/// accumulated over one interval.
///
/// Integral uses the integrated kernel |A|^-1 (e^{|A|T} - 1), the exact bound
/// on the norm of the input convolution integral. Exponential drops the -1
/// and is strictly larger; it is kept because some derivations quote that
/// form. Both are sound; Integral is the default everywhere.
enum class GrowthBound { Integral, Exponential };

/// Inflation radius |A|^-1 e^{T |A|} mu guaranteeing that the terminal
/// reachable set is covered by e^{TA} X0 inflated by this amount.
/// mu = 0 yields 0. |A| = 0 is a degenerate-dynamics error unless
/// zero_norm_limit is set, in which case the limit value T * mu is returned.
double beta_inflation(const ReachParams& p, bool zero_norm_limit = false);

/// Terminal-time over-approximation e^{TA} X0 + B(0, beta_inflation).
Zonotope terminal_reach_overapprox(const ReachParams& p, const Zonotope& x0,
                                   bool zero_norm_limit = false);

/// Per-interval inflation absorbing the estimator's exogenous terms: the
/// plant input (|Bu| <= u_b) and the output-injection correction, whose norm
/// is bounded by kh_norm times the current estimation-error bound.
/// Monotone in every argument; zero when u_b, kh_norm and est_error_bound
/// all vanish.
double input_error_inflation(double a_norm, double T, double u_b, double kh_norm,
                             double est_error_bound,
                             GrowthBound bound = GrowthBound::Integral,
                             bool zero_norm_limit = false);

}  // namespace reachquant
