#include "reachquant/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace reachquant {

namespace {

constexpr double kFeasibilityGuard = 1e-10;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_update_args(const QuantizerState& qs, const DecodedPacket& pd, const Mat& lambda,
                       double beta_ue, int levels) {
  require(levels >= 2, "region update: N must be at least 2");
  require(beta_ue >= 0.0, "region update: beta_ue must be nonnegative");
  require(!qs.C.empty() && qs.C.size() == qs.L.size(), "region update: malformed region");
  require(pd.value.size() == qs.C.size(), "region update: packet dimension mismatch");
  require(lambda.square() && lambda.rows() == qs.C.size(),
          "region update: matrix dimension mismatch");
  for (double l : qs.L) require(l > 0.0, "region update: half-widths must be positive");
}

}  // namespace

const char* scheme_name(SchemeKind s) {
  return s == SchemeKind::SetBased ? "set" : "norm";
}

QuantizerState set_based_update(const QuantizerState& qs, const DecodedPacket& pd,
                                const Mat& lambda, const Mat& lambda_bar, double beta_ue,
                                int levels) {
  check_update_args(qs, pd, lambda, beta_ue, levels);
  require(lambda_bar.rows() == lambda.rows() && lambda_bar.cols() == lambda.cols(),
          "set_based_update: lambda_bar shape mismatch");

  QuantizerState next;
  next.k = qs.k + 1;
  next.C = lambda * pd.value;
  next.L.resize(qs.L.size());
  for (std::size_t i = 0; i < qs.L.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < qs.L.size(); ++j) acc += lambda_bar(i, j) * (qs.L[j] / levels);
    next.L[i] = acc + beta_ue;
  }
  return next;
}

QuantizerState norm_based_update(const QuantizerState& qs, const DecodedPacket& pd,
                                 const Mat& lambda, double a_norm, double T, double beta_ue,
                                 int levels) {
  check_update_args(qs, pd, lambda, beta_ue, levels);
  require(a_norm >= 0.0 && T > 0.0, "norm_based_update: invalid norm or period");
  for (double l : qs.L)
    require(l == qs.L.front(), "norm_based_update: region must be a hypercube");

  QuantizerState next;
  next.k = qs.k + 1;
  next.C = lambda * pd.value;
  const double l_next = std::exp(a_norm * T) / levels * qs.L.front() + beta_ue;
  next.L.assign(qs.L.size(), l_next);
  return next;
}

FeasibilityReport feasibility_set(const Mat& a, double T, int levels) {
  require(a.square(), "feasibility: A must be square");
  require(T > 0.0, "feasibility: T must be positive");
  require(levels >= 2, "feasibility: N must be at least 2");

  Mat contraction = entrywise_abs(mat_exp(a, T));
  contraction *= 1.0 / levels;

  FeasibilityReport rep;
  rep.scheme = SchemeKind::SetBased;
  rep.lhs = spectral_radius_nonneg(contraction);
  rep.margin = 1.0 - rep.lhs;
  rep.feasible = rep.lhs < 1.0 - kFeasibilityGuard;
  return rep;
}

FeasibilityReport feasibility_norm(const Mat& a, double T, int levels) {
  require(a.square(), "feasibility: A must be square");
  require(T > 0.0, "feasibility: T must be positive");
  require(levels >= 2, "feasibility: N must be at least 2");

  FeasibilityReport rep;
  rep.scheme = SchemeKind::NormBased;
  rep.lhs = std::exp(induced_inf_norm(a) * T) / levels;
  rep.margin = 1.0 - rep.lhs;
  rep.feasible = rep.lhs < 1.0 - kFeasibilityGuard;
  return rep;
}

std::pair<FeasibilityReport, FeasibilityReport> compare_schemes(const Mat& a, double T,
                                                                int levels) {
  return {feasibility_set(a, T, levels), feasibility_norm(a, T, levels)};
}

}  // namespace reachquant
