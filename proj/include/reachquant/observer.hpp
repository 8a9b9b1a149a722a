#pragma once

#include <string>

#include "reachquant/numerics.hpp"

namespace reachquant {

/// Continuous-time LTI plant  xdot = A x + B u + E d,  y = H x.
struct PlantModel {
  Mat A;  // n x n
  Mat B;  // n x m
  Mat E;  // n x o
  Mat H;  // n_y x n

  std::size_t state_dim() const noexcept { return A.rows(); }
  std::size_t input_dim() const noexcept { return B.cols(); }
  std::size_t dist_dim() const noexcept { return E.cols(); }
  std::size_t output_dim() const noexcept { return H.rows(); }

  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;

  /// Rank of [H; HA; ...; HA^{n-1}]. Diagnostic only; the boundedness
  /// guarantees rest on the certificate, not on observability.
  std::size_t observability_rank() const;

  friend bool operator==(const PlantModel&, const PlantModel&) = default;
};

/// A-priori bounds: initial-state box B(x_c, x_b), input bound |Bu| <= u_b,
/// disturbance bound |Ed| <= d_b (all infinity norms).
struct BoundsConfig {
  Vec x_c;
  double x_b = 0.0;
  double u_b = 0.0;
  double d_b = 0.0;

  friend bool operator==(const BoundsConfig&, const BoundsConfig&) = default;
};

/// Quadratic certificate for the observer error dynamics. P must be symmetric
/// positive definite; nu1, nu2 positive.
struct ObserverCertificate {
  Mat P;   // n x n
  Mat Q;   // n x n_y
  double nu1 = 0.0;
  double nu2 = 0.0;

  friend bool operator==(const ObserverCertificate&, const ObserverCertificate&) = default;
};

struct CertificateReport {
  bool pass = false;
  double max_eigenvalue = 0.0;
  double tolerance = 0.0;
  double lambda_min_p = 0.0;
  double lambda_max_p = 0.0;
  std::string form;  // textual description of the block matrix checked
};

/// Checks that the certificate block matrix
///   [ A'P + PA + H'Q' + QH + nu1 I    P      ]
///   [ P                               -nu2 I ]
/// is negative semidefinite: symmetrized max eigenvalue <= tol. This is a
/// verification-only step; no semidefinite program is solved here.
CertificateReport verify_certificate(const PlantModel& plant, const ObserverCertificate& cert,
                                     double tol = 1e-7);

struct ObserverGains {
  Mat K;               // output-injection gain of the local estimator, P^-1 Q
  Mat Kr;              // reconstructor gain; equal to K by construction
  double lambda_e = 0.0;  // decay rate nu1 / (n lambda_max(P))
};

/// Gains implied by the certificate. Validates P but does not re-run the
/// block-matrix check; callers that need the full gate use verify_certificate.
ObserverGains derive_gains(const ObserverCertificate& cert, const PlantModel& plant);

/// Closed-form ISS-style bounds implied by a verified certificate. The
/// estimation-error pair (beta, gamma) bounds |x - xhat|; the reconstruction
/// pair (beta_rec, gamma_rec) bounds |x - xr| between transmissions.
/// All norms are infinity norms; matrix norms are induced infinity norms.
class ErrorBounds {
 public:
  ErrorBounds(const ObserverCertificate& cert, const ObserverGains& gains,
              const PlantModel& plant, const BoundsConfig& bounds);

  /// sqrt(n lmax/lmin) e^{-lambda_e s / 2} r. Class KL in (r, s).
  double beta(double r, double s) const;

  /// sqrt(n nu2 / (lmin lambda_e)) r. Class K.
  double gamma(double r) const;

  /// Same decay form as beta; transient term of the reconstruction bound.
  double beta_rec(double r, double s) const;

  /// Diagnostic variant with the exponent sign flipped to +lambda_e s / 2.
  /// Not a valid bound (it grows); exposed so reports can show both forms.
  double beta_rec_growing(double r, double s) const;

  /// Gain applied to the max of the interval suprema of |u|, |d|, |x - xhat|
  /// and the quantization error: sqrt(n nu2/(lmin lambda_e)) (|E|+|B|+|Kr H|) s.
  double gamma_rec(double s) const;

  /// beta(x_b, t) + gamma(d_b): envelope for |x(t) - xhat(t)| from t = 0.
  double estimation_error_bound(double t) const;

  /// beta_rec(|e_r(t_k)|, t - t_k) + gamma_rec(max of the four suprema over
  /// [t_k, t]): envelope for |x(t) - xr(t)| within one transmission interval.
  double reconstruction_error_bound(double er_tk, double elapsed, double sup_u, double sup_d,
                                    double sup_ehat, double sup_eq) const;

  double lambda_e() const noexcept { return lambda_e_; }
  double condition_term() const noexcept { return cond_; }
  double gamma_gain() const noexcept { return gamma_gain_; }
  double rec_gain() const noexcept { return rec_gain_; }

 private:
  double cond_ = 0.0;
  double lambda_e_ = 0.0;
  double gamma_gain_ = 0.0;
  double rec_gain_ = 0.0;
  double x_b_ = 0.0;
  double d_b_ = 0.0;
};

}  // namespace reachquant
