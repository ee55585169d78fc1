#ifndef GINV_CHAIN_HPP
#define GINV_CHAIN_HPP

#include "ginv/matrix.hpp"

namespace ginv {

// A validated finite irreducible Markov chain: nonnegative transition
// matrix with rows renormalized to sum to one, strongly connected support
// graph, and the stationary distribution cached at construction.
class StochasticChain {
 public:
  static StochasticChain validate(const Matrix& p_raw,
                                  const Tolerance& tol = Tolerance{});

  std::size_t size() const { return p_.rows(); }
  const Matrix& transition() const { return p_; }
  const Vector& pi() const { return pi_; }

  // I - P, the singular kernel every generalized inverse refers to.
  Matrix kernel() const;
  // e pi^T: each row is the stationary distribution.
  Matrix stationary_projector() const;
  // diag(1/pi_j), the matrix of mean recurrence times.
  Matrix recurrence_diag() const;

 private:
  StochasticChain(Matrix p, Vector pi) : p_(std::move(p)), pi_(std::move(pi)) {}

  Matrix p_;
  Vector pi_;
};

StochasticChain validate_chain(const Matrix& p_raw,
                               const Tolerance& tol = Tolerance{});

// True iff the directed graph with an edge i->j whenever p_ij > 0 is
// strongly connected. Uses one forward and one transposed breadth-first
// sweep from the first state.
bool is_irreducible(const Matrix& p);

// Stationary vector of a validated irreducible transition matrix, computed
// by solving with the rank-one corrected kernel I - P + e e^T / m and then
// renormalizing so the components sum to exactly one.
Vector stationary_distribution(const Matrix& p);

// Divides by the sum, then nudges the largest-magnitude component until the
// floating-point sum is exactly one.
void normalize_to_one(Vector& v);

}  // namespace ginv

#endif  // GINV_CHAIN_HPP
