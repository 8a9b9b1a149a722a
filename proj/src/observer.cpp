#include "reachquant/observer.hpp"

#include <cmath>
#include <stdexcept>

#include "reachquant/errors.hpp"

namespace reachquant {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_certificate_shapes(const PlantModel& plant, const ObserverCertificate& cert) {
  const std::size_t n = plant.state_dim();
  require(cert.P.rows() == n && cert.P.cols() == n, "certificate: P must be n x n");
  require(cert.Q.rows() == n && cert.Q.cols() == plant.output_dim(),
          "certificate: Q must be n x n_y");
  require(cert.nu1 > 0.0 && cert.nu2 > 0.0, "certificate: nu1 and nu2 must be positive");

  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(cert.P(i, j) - cert.P(j, i)));
  require(asym <= 1e-9, "certificate: P must be symmetric");
}

}  // namespace

void PlantModel::validate() const {
  require(A.square() && A.rows() > 0, "plant: A must be square");
  const std::size_t n = A.rows();
  require(B.rows() == n && B.cols() > 0, "plant: B must be n x m");
  require(E.rows() == n && E.cols() > 0, "plant: E must be n x o");
  require(H.cols() == n && H.rows() > 0, "plant: H must be n_y x n");
}

std::size_t PlantModel::observability_rank() const {
  validate();
  const std::size_t n = state_dim();
  const std::size_t ny = output_dim();
  Mat obs(ny * n, n, 0.0);
  Mat block = H;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t i = 0; i < ny; ++i)
      for (std::size_t j = 0; j < n; ++j) obs(p * ny + i, j) = block(i, j);
    block = block * A;
  }
  return matrix_rank(obs);
}

CertificateReport verify_certificate(const PlantModel& plant, const ObserverCertificate& cert,
                                     double tol) {
  plant.validate();
  check_certificate_shapes(plant, cert);

  const std::size_t n = plant.state_dim();
  const double lmin_p = min_eig_symmetric(cert.P);
  const double lmax_p = max_eig_symmetric(cert.P);
  if (lmin_p <= 0.0) throw std::invalid_argument("certificate: P must be positive definite");

  Mat tl = plant.A.transpose() * cert.P + cert.P * plant.A +
           plant.H.transpose() * cert.Q.transpose() + cert.Q * plant.H;
  for (std::size_t i = 0; i < n; ++i) tl(i, i) += cert.nu1;

  Mat block(2 * n, 2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      block(i, j) = tl(i, j);
      block(i, n + j) = cert.P(i, j);
      block(n + i, j) = cert.P(i, j);
    }
  for (std::size_t i = 0; i < n; ++i) block(n + i, n + i) = -cert.nu2;

  const Mat sym = (block + block.transpose()) * 0.5;
  const double max_eig = max_eig_symmetric(sym);

  CertificateReport report;
  report.pass = max_eig <= tol;
  report.max_eigenvalue = max_eig;
  report.tolerance = tol;
  report.lambda_min_p = lmin_p;
  report.lambda_max_p = lmax_p;
  report.form = "sym([[A'P + PA + H'Q' + QH + nu1*I, P], [P, -nu2*I]])";
  return report;
}

ObserverGains derive_gains(const ObserverCertificate& cert, const PlantModel& plant) {
  plant.validate();
  check_certificate_shapes(plant, cert);
  const double lmax_p = max_eig_symmetric(cert.P);
  if (min_eig_symmetric(cert.P) <= 0.0)
    throw std::invalid_argument("certificate: P must be positive definite");

  ObserverGains gains;
  gains.K = solve(cert.P, cert.Q);
  gains.Kr = gains.K;
  gains.lambda_e = cert.nu1 / (static_cast<double>(plant.state_dim()) * lmax_p);
  return gains;
}

ErrorBounds::ErrorBounds(const ObserverCertificate& cert, const ObserverGains& gains,
                         const PlantModel& plant, const BoundsConfig& bounds) {
  plant.validate();
  check_certificate_shapes(plant, cert);
  require(bounds.x_b >= 0.0 && bounds.u_b >= 0.0 && bounds.d_b >= 0.0,
          "bounds: x_b, u_b, d_b must be nonnegative");

  const double n = static_cast<double>(plant.state_dim());
  const double lmin = min_eig_symmetric(cert.P);
  const double lmax = max_eig_symmetric(cert.P);
  if (lmin <= 0.0) throw std::invalid_argument("certificate: P must be positive definite");
  require(gains.lambda_e > 0.0, "gains: lambda_e must be positive");

  cond_ = std::sqrt(n * lmax / lmin);
  lambda_e_ = gains.lambda_e;
  gamma_gain_ = std::sqrt(n * cert.nu2 / (lmin * lambda_e_));
  rec_gain_ = gamma_gain_ * (induced_inf_norm(plant.E) + induced_inf_norm(plant.B) +
                             induced_inf_norm(gains.Kr * plant.H));
  x_b_ = bounds.x_b;
  d_b_ = bounds.d_b;
}

double ErrorBounds::beta(double r, double s) const {
  if (r < 0.0 || s < 0.0) throw std::invalid_argument("beta: arguments must be nonnegative");
  return cond_ * std::exp(-lambda_e_ * s / 2.0) * r;
}

double ErrorBounds::gamma(double r) const {
  if (r < 0.0) throw std::invalid_argument("gamma: argument must be nonnegative");
  return gamma_gain_ * r;
}

double ErrorBounds::beta_rec(double r, double s) const { return beta(r, s); }

double ErrorBounds::beta_rec_growing(double r, double s) const {
  if (r < 0.0 || s < 0.0)
    throw std::invalid_argument("beta_rec_growing: arguments must be nonnegative");
  return cond_ * std::exp(lambda_e_ * s / 2.0) * r;
}

double ErrorBounds::gamma_rec(double s) const {
  if (s < 0.0) throw std::invalid_argument("gamma_rec: argument must be nonnegative");
  return rec_gain_ * s;
}

double ErrorBounds::estimation_error_bound(double t) const {
  return beta(x_b_, t) + gamma(d_b_);
}

double ErrorBounds::reconstruction_error_bound(double er_tk, double elapsed, double sup_u,
                                               double sup_d, double sup_ehat,
                                               double sup_eq) const {
  const double sup = std::max(std::max(sup_u, sup_d), std::max(sup_ehat, sup_eq));
  return beta_rec(er_tk, elapsed) + gamma_rec(sup);
}

}  // namespace reachquant
