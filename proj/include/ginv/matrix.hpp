#ifndef GINV_MATRIX_HPP
#define GINV_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ginv {

// Absolute/relative tolerance pair used by the approximate comparisons.
// At least one component must be strictly positive.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  Tolerance() = default;
  Tolerance(double abs_value, double rel_value);
};

// Dense real vector. Entries are doubles; all public operations keep them
// finite.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  const std::vector<double>& values() const { return data_; }

 private:
  std::vector<double> data_;
};

// Dense real matrix, row-major storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  // All-ones matrix of the given order.
  static Matrix ones(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Matrix transpose() const;
  Vector diagonal() const;
  double trace() const;
  Vector row_sums() const;
  Vector col_sums() const;
  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Vector operator*(const Matrix& a, const Vector& x);   // A x
Vector operator*(const Vector& x, const Matrix& a);   // x^T A, as a vector

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);

double dot(const Vector& a, const Vector& b);
Matrix outer(const Vector& a, const Vector& b);  // a b^T
Vector ones_vector(std::size_t n);
Vector basis_vector(std::size_t n, std::size_t i);
// diag(v) as a full matrix.
Matrix diagonal_matrix(const Vector& v);
// Copy of a with every off-diagonal entry zeroed (the "_d" operator).
Matrix diagonal_part(const Matrix& a);

double sum(const Vector& v);
double one_norm(const Vector& v);
double inf_norm(const Vector& v);
// Maximum absolute row sum.
double inf_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

bool all_finite(const Matrix& a);
bool all_finite(const Vector& v);

// Entrywise |a-b| <= abs + rel*max(|a|,|b|). Throws ShapeMismatch on
// differing shapes.
bool approx_eq(const Matrix& a, const Matrix& b, const Tolerance& tol);
bool approx_eq(const Vector& a, const Vector& b, const Tolerance& tol);

// Solves A X = B by LU factorization with partial pivoting. A pivot whose
// magnitude does not exceed 1e-12 times the largest absolute entry of the
// input matrix signals SingularMatrix.
Matrix solve_linear(const Matrix& a, const Matrix& b);
Vector solve_linear(const Matrix& a, const Vector& b);
Matrix invert(const Matrix& a);

}  // namespace ginv

#endif  // GINV_MATRIX_HPP
