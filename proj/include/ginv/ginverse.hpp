#ifndef GINV_GINVERSE_HPP
#define GINV_GINVERSE_HPP

#include "ginv/chain.hpp"
#include "ginv/matrix.hpp"

namespace ginv {

// Parametric characterization of a one-condition g-inverse of I - P:
// G = [I - P + alpha beta^T]^{-1} + gamma e pi^T with pi^T alpha = 1 and
// beta^T e = 1. The triple is unique for each G.
struct GInverseParams {
  Vector alpha;
  Vector beta;
  double gamma = 0.0;
};

// A g-inverse together with its characterization. Instances are only
// produced by the builders below, which verify the defining residuals.
struct GInverse {
  Matrix matrix;
  GInverseParams params;
};

// Membership flags for the classical multi-condition classes. Condition 1
// always holds for a constructed GInverse. Condition 5 splits into the
// one-sided conditions 5a (constant row sums) and 5b (pi^T G proportional
// to pi^T) and holds exactly when both do.
struct ConditionSet {
  bool cond2 = false;
  bool cond3 = false;
  bool cond4 = false;
  bool cond5 = false;
  bool cond5a = false;
  bool cond5b = false;
};

// [I - P + t u^T]^{-1}. Requires pi^T t != 0 and u^T e != 0; the inverse is
// checked against its defining identities before being returned.
Matrix build_base_inverse(const StochasticChain& chain, const Vector& t,
                          const Vector& u);

// [I - P + t u^T]^{-1} + e f^T + g pi^T, the general one-condition form.
GInverse build_one_condition(const StochasticChain& chain, const Vector& t,
                             const Vector& u, const Vector& f,
                             const Vector& g);

// Builds G(alpha, beta, gamma) from its parameters and verifies the
// characterization round-trips.
GInverse build_parametric(const StochasticChain& chain,
                          const GInverseParams& params);

// Recovers (alpha, beta, gamma) from a raw matrix. Throws NotAGInverse when
// the one-condition residual is too large, and ClassificationInconsistent
// when the redundant gamma computations disagree.
GInverseParams characterize(const StochasticChain& chain, const Matrix& g);

// Classifies by parameter tests, cross-checked against the direct matrix
// conditions; any mismatch throws ClassificationInconsistent.
ConditionSet classify(const StochasticChain& chain, const GInverse& ginv);

// Z = [I - P + e pi^T]^{-1}, with parameters (e, pi, 0).
GInverse fundamental_matrix(const StochasticChain& chain);

// A# = Z - e pi^T, the unique inverse satisfying conditions 1, 2 and 5.
GInverse group_inverse(const StochasticChain& chain);

// The unique inverse satisfying conditions 1-4. Two published closed forms
// are evaluated and compared, and all four defining conditions verified.
GInverse moore_penrose(const StochasticChain& chain);

// H = G(I - e pi^T). Maps any g-inverse to parameters (e, beta, -1), hence
// into the class satisfying conditions 1, 2 and 5a.
GInverse deflate(const StochasticChain& chain, const GInverse& ginv);

// (I - e pi^T) G (I - e pi^T), which equals the group inverse for every
// one-condition g-inverse G.
Matrix project_to_group_inverse(const StochasticChain& chain, const Matrix& g);

}  // namespace ginv

#endif  // GINV_GINVERSE_HPP
