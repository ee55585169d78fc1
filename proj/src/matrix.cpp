#include "ginv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>

#include "ginv/errors.hpp"

namespace ginv {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch("matrix shapes differ: " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
}

void require_same_size(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw ShapeMismatch("vector lengths differ: " + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()));
  }
}

}  // namespace

Tolerance::Tolerance(double abs_value, double rel_value)
    : abs(abs_value), rel(rel_value) {
  if (!(abs >= 0.0) || !(rel >= 0.0)) {
    throw ShapeMismatch("tolerance components must be nonnegative");
  }
  if (!(abs > 0.0 || rel > 0.0)) {
    throw ShapeMismatch("at least one tolerance component must be positive");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw ShapeMismatch("ragged initializer list");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, 1.0);
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::diagonal() const {
  const std::size_t n = std::min(rows_, cols_);
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
  return d;
}

double Matrix::trace() const {
  double t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

Vector Matrix::row_sums() const {
  Vector s(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j);
    s[i] = acc;
  }
  return s;
}

Vector Matrix::col_sums() const {
  Vector s(cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) s[j] += (*this)(i, j);
  return s;
}

Vector Matrix::row(std::size_t i) const {
  Vector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vector Matrix::col(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("matrix product shape mismatch");
  }
  Matrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

Matrix operator*(double s, Matrix a) { return a *= s; }

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw ShapeMismatch("matrix-vector shape mismatch");
  }
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

Vector operator*(const Vector& x, const Matrix& a) {
  if (a.rows() != x.size()) {
    throw ShapeMismatch("vector-matrix shape mismatch");
  }
  Vector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += xi * a(i, j);
  }
  return y;
}

Vector operator+(Vector a, const Vector& b) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Vector operator-(Vector a, const Vector& b) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Vector operator*(double s, Vector a) {
  for (double& x : a) x *= s;
  return a;
}

double dot(const Vector& a, const Vector& b) {
  require_same_size(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Matrix outer(const Vector& a, const Vector& b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

Vector ones_vector(std::size_t n) { return Vector(n, 1.0); }

Vector basis_vector(std::size_t n, std::size_t i) {
  Vector v(n, 0.0);
  v[i] = 1.0;
  return v;
}

Matrix diagonal_matrix(const Vector& v) {
  Matrix m(v.size(), v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

Matrix diagonal_part(const Matrix& a) {
  Matrix m(a.rows(), a.cols(), 0.0);
  const std::size_t n = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = a(i, i);
  return m;
}

double sum(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

double one_norm(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

double inf_norm(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double inf_norm(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += std::abs(a(i, j));
    m = std::max(m, acc);
  }
  return m;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j)));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  require_same_size(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!std::isfinite(a(i, j))) return false;
  return true;
}

bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool approx_eq(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double x = a(i, j);
      const double y = b(i, j);
      if (std::abs(x - y) >
          tol.abs + tol.rel * std::max(std::abs(x), std::abs(y))) {
        return false;
      }
    }
  }
  return true;
}

bool approx_eq(const Vector& a, const Vector& b, const Tolerance& tol) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) >
        tol.abs + tol.rel * std::max(std::abs(a[i]), std::abs(b[i]))) {
      return false;
    }
  }
  return true;
}

namespace {

constexpr double kPivotRel = 1e-12;

// Packed LU factors with the row permutation applied during elimination.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;
};

LuFactors lu_factor(const Matrix& a) {
  const std::size_t n = a.rows();
  LuFactors f{a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

  const double threshold = kPivotRel * max_abs(a);
  Matrix& lu = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double pivot_mag = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(lu(i, k));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (!(pivot_mag > threshold)) {
      throw SingularMatrix("pivot " + std::to_string(pivot_mag) +
                           " below threshold at column " + std::to_string(k));
    }
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(lu(k, j), lu(pivot_row, j));
      std::swap(f.perm[k], f.perm[pivot_row]);
    }
    const double pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      lu(i, k) /= pivot;
      const double lik = lu(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lik * lu(k, j);
    }
  }
  return f;
}

void lu_solve_column(const LuFactors& f, const Matrix& b, std::size_t col,
                     Matrix& x) {
  const std::size_t n = f.lu.rows();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b(f.perm[i], col);
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * y[j];
    y[i] = acc;
  }
  for (std::size_t ii = n; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double acc = y[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu(i, j) * x(j, col);
    x(i, col) = acc / f.lu(i, i);
  }
}

}  // namespace

Matrix solve_linear(const Matrix& a, const Matrix& b) {
  if (!a.square()) {
    throw ShapeMismatch("coefficient matrix must be square");
  }
  if (a.rows() != b.rows()) {
    throw ShapeMismatch("right-hand side row count mismatch");
  }
  const LuFactors f = lu_factor(a);
  Matrix x(b.rows(), b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    lu_solve_column(f, b, col, x);
  }
  if (!all_finite(x)) {
    throw SingularMatrix("non-finite solution entries");
  }
  return x;
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  Matrix rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  return solve_linear(a, rhs).col(0);
}

Matrix invert(const Matrix& a) {
  if (!a.square()) {
    throw ShapeMismatch("only square matrices can be inverted");
  }
  return solve_linear(a, Matrix::identity(a.rows()));
}

}  // namespace ginv
