#include "reachquant/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reachquant {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_same_shape(const Mat& a, const Mat& b, const char* msg) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), msg);
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require(rows > 0 && cols > 0, "Mat: dimensions must be positive");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  require(rows.size() > 0, "Mat: empty initializer");
  rows_ = rows.size();
  cols_ = rows.begin()->size();
  require(cols_ > 0, "Mat: empty row");
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    require(row.size() == cols_, "Mat: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transpose() const {
  Mat out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Mat& Mat::operator+=(const Mat& rhs) {
  require_same_shape(*this, rhs, "Mat: shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& rhs) {
  require_same_shape(*this, rhs, "Mat: shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Mat operator*(const Mat& lhs, const Mat& rhs) {
  require(lhs.cols() == rhs.rows(), "Mat: shape mismatch in *");
  Mat out(lhs.rows(), rhs.cols(), 0.0);
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double lik = lhs(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += lik * rhs(k, j);
    }
  return out;
}

Vec Mat::operator*(const Vec& v) const {
  require(cols_ == v.size(), "Mat: shape mismatch in mat * vec");
  Vec out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double inf_norm(const Vec& v) {
  require(!v.empty(), "inf_norm: empty vector");
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

double induced_inf_norm(const Mat& m) {
  require(m.rows() > 0, "induced_inf_norm: empty matrix");
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double max_col_sum_norm(const Mat& m) {
  require(m.square(), "max_col_sum_norm: matrix must be square");
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

Mat mat_exp(const Mat& m, double t) {
  require(m.square(), "mat_exp: matrix must be square");
  require(std::isfinite(t), "mat_exp: t must be finite");
  const std::size_t n = m.rows();

  Mat a = m * t;
  const double norm = induced_inf_norm(a);
  if (!std::isfinite(norm)) throw std::range_error("mat_exp: non-finite input");

  // Scale so the series argument has norm at most 0.5, square back after.
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  a *= std::ldexp(1.0, -squarings);

  Mat result = Mat::identity(n);
  Mat term = Mat::identity(n);
  for (int k = 1; k <= 60; ++k) {
    term = term * a;
    term *= 1.0 / k;
    result += term;
    if (induced_inf_norm(term) <= 1e-18 * std::max(1.0, induced_inf_norm(result))) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;

  for (double x : result.data())
    if (!std::isfinite(x)) throw std::range_error("mat_exp: overflow");
  return result;
}

double spectral_radius_nonneg(const Mat& m) {
  require(m.square(), "spectral_radius_nonneg: matrix must be square");
  for (double x : m.data()) require(x >= 0.0, "spectral_radius_nonneg: negative entry");

  const double a0 = induced_inf_norm(m);
  if (a0 == 0.0) return 0.0;

  Mat d = m * (1.0 / a0);
  double log_norm = std::log(a0);  // log |M^{2^j}| with renormalized powers
  double estimate = a0;
  double pow2 = 1.0;
  for (int j = 1; j <= 48; ++j) {
    const Mat c = d * d;
    const double cj = induced_inf_norm(c);
    if (cj == 0.0) return 0.0;  // nilpotent
    d = c * (1.0 / cj);
    log_norm = 2.0 * log_norm + std::log(cj);
    pow2 *= 2.0;
    const double next = std::exp(log_norm / pow2);
    if (std::abs(next - estimate) < 1e-9) return next;
    estimate = next;
  }
  return estimate;
}

std::vector<double> symmetric_eigenvalues(const Mat& s) {
  require(s.square(), "symmetric_eigenvalues: matrix must be square");
  const std::size_t n = s.rows();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
  require(asym <= 1e-9, "symmetric_eigenvalues: matrix is not symmetric");

  Mat a = (s + s.transpose()) * 0.5;
  if (n == 1) return {a(0, 0)};

  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  frob = std::sqrt(frob);

  const auto off_norm = [&a, n] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > 1e-14 * std::max(1.0, frob); ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double tt = (theta >= 0.0 ? 1.0 : -1.0) /
                          (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double sn = tt * c;
        for (std::size_t k = 0; k < n; ++k) {  // columns p, q
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // rows p, q
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double max_eig_symmetric(const Mat& s) { return symmetric_eigenvalues(s).back(); }

double min_eig_symmetric(const Mat& s) { return symmetric_eigenvalues(s).front(); }

Mat entrywise_abs(const Mat& m) {
  Mat out = m;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = std::abs(out(i, j));
  return out;
}

Mat solve(const Mat& a, const Mat& b) {
  require(a.square(), "solve: coefficient matrix must be square");
  require(a.rows() == b.rows(), "solve: shape mismatch");
  const std::size_t n = a.rows();
  const std::size_t k = b.cols();
  Mat lu = a;
  Mat x = b;

  double scale = induced_inf_norm(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(lu(row, col)) > std::abs(lu(pivot, col))) pivot = row;
    if (std::abs(lu(pivot, col)) <= 1e-13 * std::max(1.0, scale))
      throw std::domain_error("solve: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
      for (std::size_t j = 0; j < k; ++j) std::swap(x(col, j), x(pivot, j));
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = lu(row, col) / lu(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) lu(row, j) -= f * lu(col, j);
      for (std::size_t j = 0; j < k; ++j) x(row, j) -= f * x(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    for (std::size_t j = 0; j < k; ++j) {
      double acc = x(col, j);
      for (std::size_t jj = col + 1; jj < n; ++jj) acc -= lu(col, jj) * x(jj, j);
      x(col, j) = acc / lu(col, col);
    }
  }
  return x;
}

Vec solve(const Mat& a, const Vec& b) {
  Mat rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  const Mat x = solve(a, rhs);
  Vec out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(i, 0);
  return out;
}

std::size_t matrix_rank(const Mat& m, double tol) {
  Mat a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  double scale = 0.0;
  for (double x : a.data()) scale = std::max(scale, std::abs(x));
  const double thresh = tol * std::max(1.0, scale);

  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    for (std::size_t row = rank + 1; row < rows; ++row)
      if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
    if (std::abs(a(pivot, col)) <= thresh) continue;
    if (pivot != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(rank, j), a(pivot, j));
    for (std::size_t row = rank + 1; row < rows; ++row) {
      const double f = a(row, col) / a(rank, col);
      for (std::size_t j = col; j < cols; ++j) a(row, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

Vec rk4_step(const VectorField& f, double t, const Vec& z, double h) {
  require(h > 0.0 && std::isfinite(h), "rk4_step: step must be positive and finite");

  const auto checked = [&z](Vec v) {
    if (v.size() != z.size()) throw std::invalid_argument("rk4_step: field dimension mismatch");
    for (double x : v)
      if (!std::isfinite(x)) throw std::runtime_error("rk4_step: divergent state");
    return v;
  };
  const auto shifted = [&z](const Vec& k, double c) {
    Vec out = z;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * k[i];
    return out;
  };

  const Vec k1 = checked(f(t, z));
  const Vec k2 = checked(f(t + h / 2.0, shifted(k1, h / 2.0)));
  const Vec k3 = checked(f(t + h / 2.0, shifted(k2, h / 2.0)));
  const Vec k4 = checked(f(t + h, shifted(k3, h)));

  Vec out = z;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  for (double x : out)
    if (!std::isfinite(x)) throw std::runtime_error("rk4_step: divergent state");
  return out;
}

}  // namespace reachquant
