#include "ginv/chain.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ginv/errors.hpp"

namespace ginv {

namespace {

// Marks every state reachable from `start` along edges selected by
// `transposed` (false: i->j iff p_ij > 0, true: reversed).
std::vector<bool> reachable(const Matrix& p, std::size_t start,
                            bool transposed) {
  const std::size_t m = p.rows();
  std::vector<bool> seen(m, false);
  std::vector<std::size_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    for (std::size_t j = 0; j < m; ++j) {
      const double w = transposed ? p(j, i) : p(i, j);
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const Matrix& p) {
  if (!p.square() || p.rows() == 0) return false;
  for (bool transposed : {false, true}) {
    for (bool hit : reachable(p, 0, transposed)) {
      if (!hit) return false;
    }
  }
  return true;
}

void normalize_to_one(Vector& v) {
  const double s = sum(v);
  if (s == 0.0 || !std::isfinite(s)) {
    throw SingularMatrix("cannot normalize vector with zero or non-finite sum");
  }
  for (double& x : v) x /= s;
  // The division leaves the sum within a few ulps of one; push the residual
  // into one component until the sum is exactly one. Rotating the adjusted
  // component breaks the rare two-state rounding oscillation.
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  for (int pass = 0; pass < 32; ++pass) {
    const double residual = sum(v) - 1.0;
    if (residual == 0.0) return;
    v[k] -= residual;
    if (pass >= 2) k = (k + 1) % v.size();
  }
  for (int pass = 0; pass < 64; ++pass) {
    const double residual = sum(v) - 1.0;
    if (residual == 0.0) return;
    v[k] = std::nextafter(v[k], residual > 0.0 ? -1.0e308 : 1.0e308);
  }
}

Vector stationary_distribution(const Matrix& p) {
  const std::size_t m = p.rows();
  // I - P + t u^T with t = e and u = e/m keeps the perturbed kernel
  // well scaled and nonsingular for every irreducible chain; the stationary
  // vector is the solution of the transposed system with right-hand side u.
  Matrix a(m, m);
  const double u = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(i, j) = (i == j ? 1.0 : 0.0) - p(i, j) + u;
  Vector rhs(m, u);
  Vector pi = solve_linear(a.transpose(), rhs);
  normalize_to_one(pi);
  return pi;
}

StochasticChain StochasticChain::validate(const Matrix& p_raw,
                                          const Tolerance& tol) {
  if (!p_raw.square() || p_raw.rows() == 0) {
    throw NotStochastic("transition matrix must be square and nonempty");
  }
  const std::size_t m = p_raw.rows();
  Matrix p = p_raw;
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = p(i, j);
      if (!std::isfinite(x)) {
        throw NotStochastic("non-finite entry in row " + std::to_string(i + 1));
      }
      if (x < 0.0) {
        throw NotStochastic("negative entry in row " + std::to_string(i + 1));
      }
      row_sum += x;
    }
    if (std::abs(row_sum - 1.0) > tol.abs + tol.rel) {
      throw NotStochastic("row " + std::to_string(i + 1) + " sums to " +
                          std::to_string(row_sum));
    }
    for (std::size_t j = 0; j < m; ++j) p(i, j) /= row_sum;
  }
  if (!is_irreducible(p)) {
    throw NotIrreducible("transition graph is not strongly connected");
  }
  Vector pi = stationary_distribution(p);
  for (std::size_t j = 0; j < m; ++j) {
    if (!(pi[j] > 0.0)) {
      throw NotIrreducible("stationary probability of state " +
                           std::to_string(j + 1) + " is not positive");
    }
  }
  return StochasticChain(std::move(p), std::move(pi));
}

StochasticChain validate_chain(const Matrix& p_raw, const Tolerance& tol) {
  return StochasticChain::validate(p_raw, tol);
}

Matrix StochasticChain::kernel() const {
  return Matrix::identity(size()) - p_;
}

Matrix StochasticChain::stationary_projector() const {
  return outer(ones_vector(size()), pi_);
}

Matrix StochasticChain::recurrence_diag() const {
  Vector d(size());
  for (std::size_t j = 0; j < size(); ++j) d[j] = 1.0 / pi_[j];
  return diagonal_matrix(d);
}

}  // namespace ginv
