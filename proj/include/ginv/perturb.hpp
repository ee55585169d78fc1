#ifndef GINV_PERTURB_HPP
#define GINV_PERTURB_HPP

#include <string>
#include <utility>
#include <vector>

#include "ginv/chain.hpp"
#include "ginv/ginverse.hpp"
#include "ginv/matrix.hpp"

namespace ginv {

struct KemenyBound {
  double bound = 0.0;      // (K - 1) ||E||_inf
  double lhs = 0.0;        // ||pi - pi_bar||_1
  bool satisfied = false;  // lhs <= bound (with rounding slack)
};

struct PerturbationReport {
  Vector pi_bar;
  Vector delta;  // pi_bar - pi, adjusted to sum exactly to zero
  std::vector<std::pair<std::string, Vector>> route_deltas;
  double max_route_discrepancy = 0.0;
  KemenyBound bound;
};

// Checks that E has zero row sums and that P + E is a valid irreducible
// chain; returns the perturbed chain. Errors name the offending row.
StochasticChain validate_perturbation(const StochasticChain& chain,
                                      const Matrix& perturbation,
                                      const Tolerance& tol = Tolerance{});

// Stationary vector of P + E via the fixed-point identity
// pi_bar^T (I - E A#) = pi^T, cross-checked against a direct solve on the
// perturbed chain.
Vector perturbed_stationary(const StochasticChain& chain,
                            const Matrix& perturbation);

// Evaluates every matrix and element-wise expression for pi_bar - pi and
// verifies they agree with the directly recomputed difference.
PerturbationReport delta_routes(const StochasticChain& chain,
                                const Matrix& perturbation,
                                const GInverse& ginv);

// N = (M - M_d) M_d^{-1}, computed both as a matrix product and from the
// element identity n_ij = (1 - delta_ij) m_ij / m_jj.
Matrix n_matrix(const Matrix& mean_passage);

// ||pi - pi_bar||_1 <= (K - 1) ||E||_inf.
KemenyBound kemeny_bound(const StochasticChain& chain,
                         const Matrix& perturbation);

}  // namespace ginv

#endif  // GINV_PERTURB_HPP
