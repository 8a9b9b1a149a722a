#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

namespace reachquant {

/// Dense real vector; the dimension is the length.
using Vec = std::vector<double>;

/// Dense real matrix with row-major storage.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }

  Mat transpose() const;

  Mat& operator+=(const Mat& rhs);
  Mat& operator-=(const Mat& rhs);
  Mat& operator*=(double s);

  friend Mat operator+(Mat lhs, const Mat& rhs) { return lhs += rhs; }
  friend Mat operator-(Mat lhs, const Mat& rhs) { return lhs -= rhs; }
  friend Mat operator*(Mat lhs, double s) { return lhs *= s; }
  friend Mat operator*(double s, Mat rhs) { return rhs *= s; }
  friend Mat operator*(const Mat& lhs, const Mat& rhs);
  friend bool operator==(const Mat& lhs, const Mat& rhs) = default;

  Vec operator*(const Vec& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Max absolute entry of a nonempty vector.
double inf_norm(const Vec& v);

/// Induced infinity norm: max absolute row sum. Accepts rectangular matrices.
double induced_inf_norm(const Mat& m);

/// Max absolute column sum of a square matrix. Kept alongside the induced
/// infinity norm because some sources define |A| this way; all bound
/// computations in this library use induced_inf_norm.
double max_col_sum_norm(const Mat& m);

/// e^{M t} by scaling and squaring with a truncated Taylor series. The scaling
/// exponent is chosen so the scaled norm is at most 0.5. Throws
/// std::range_error when the result is not finite.
Mat mat_exp(const Mat& m, double t);

/// Spectral radius of an entrywise-nonnegative square matrix via the Gelfand
/// sequence |M^{2^j}|^{1/2^j} with renormalized powers. Iterates until two
/// successive estimates differ by less than 1e-9, or j = 48.
double spectral_radius_nonneg(const Mat& m);

/// All eigenvalues of a symmetric matrix (cyclic Jacobi), ascending order.
/// The input must be symmetric to within 1e-9 and is symmetrized internally.
std::vector<double> symmetric_eigenvalues(const Mat& s);
double max_eig_symmetric(const Mat& s);
double min_eig_symmetric(const Mat& s);

/// Entrywise absolute value.
Mat entrywise_abs(const Mat& m);

/// Solve a X = b for square a via partially pivoted LU. b may have any
/// column count. Throws std::domain_error on a numerically singular a.
Mat solve(const Mat& a, const Mat& b);
Vec solve(const Mat& a, const Vec& b);

/// Numerical rank via row elimination with relative pivot tolerance.
std::size_t matrix_rank(const Mat& m, double tol = 1e-9);

using VectorField = std::function<Vec(double, const Vec&)>;

/// One classical fourth-order Runge-Kutta step from (t, z) with step h > 0.
/// Non-finite stage values raise std::runtime_error.
Vec rk4_step(const VectorField& f, double t, const Vec& z, double h);

}  // namespace reachquant
