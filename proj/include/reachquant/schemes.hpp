#pragma once

#include <utility>

#include "reachquant/numerics.hpp"
#include "reachquant/quantizer.hpp"

namespace reachquant {

/// The two region-update laws. SetBased propagates the decoded cell as a box
/// through the interval-hulled reach set and keeps per-axis half-widths;
/// NormBased collapses the region to a hypercube via the matrix norm bound.
enum class SchemeKind { SetBased, NormBased };

const char* scheme_name(SchemeKind s);

/// Set-based update:
///   C' = Lambda P_d
///   L'_i = sum_j |Lambda_ij| (L_j / N) + beta_ue.
/// Equals hulling the linearly mapped decoded cell inflated by beta_ue; the
/// summation order matches that path so the two agree exactly.
QuantizerState set_based_update(const QuantizerState& qs, const DecodedPacket& pd,
                                const Mat& lambda, const Mat& lambda_bar, double beta_ue,
                                int levels);

/// Norm-based update (requires all L entries equal):
///   C' = Lambda P_d
///   L' = (e^{|A| T} / N) L + beta_ue,  applied to every axis.
QuantizerState norm_based_update(const QuantizerState& qs, const DecodedPacket& pd,
                                 const Mat& lambda, double a_norm, double T, double beta_ue,
                                 int levels);

struct FeasibilityReport {
  SchemeKind scheme = SchemeKind::SetBased;
  double lhs = 0.0;      // contraction factor that must stay below 1
  bool feasible = false;
  double margin = 0.0;   // 1 - lhs
};

/// Set-based boundedness test: rho(|e^{AT}| / N) < 1 (with 1e-10 guard).
FeasibilityReport feasibility_set(const Mat& a, double T, int levels);

/// Norm-based boundedness test: e^{|A| T} / N < 1 (with 1e-10 guard).
FeasibilityReport feasibility_norm(const Mat& a, double T, int levels);

/// Both feasibility tests side by side. Whenever the norm-based test passes,
/// the set-based one does too: rho(|e^{AT}|/N) <= e^{|A|T}/N.
std::pair<FeasibilityReport, FeasibilityReport> compare_schemes(const Mat& a, double T,
                                                                int levels);

}  // namespace reachquant
