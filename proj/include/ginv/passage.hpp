#ifndef GINV_PASSAGE_HPP
#define GINV_PASSAGE_HPP

#include <optional>
#include <string>

#include "ginv/chain.hpp"
#include "ginv/ginverse.hpp"
#include "ginv/matrix.hpp"

namespace ginv {

// Mean first passage times m_ij: expected steps to first reach j from i,
// with the diagonal holding the mean recurrence times 1/pi_j.
struct PassageTimes {
  Matrix mean;
};

// Column aggregates of M under different weightings: delta uses a supplied
// beta, eta the uniform weights, tau the stationary weights.
struct DerivedVectors {
  Vector delta;
  Vector eta;
  Vector tau;
};

// Reference route: per-column linear systems in the m-1 off-target states.
// Uses no g-inverse machinery, so it serves as the independent oracle for
// every other route.
PassageTimes mfpt_direct(const StochasticChain& chain);

// M = [G Pi - E (G Pi)_d + I - G + E G_d] D for any one-condition g-inverse.
PassageTimes mfpt_from_ginverse(const StochasticChain& chain,
                                const GInverse& ginv);

// Same, after deflating G to H = G(I - Pi): M = [I - H + E H_d] D.
PassageTimes mfpt_from_deflated(const StochasticChain& chain,
                                const GInverse& ginv);

// Shortcut valid exactly for inverses with constant row sums (condition 5a):
// m_ij = (g_jj - g_ij + delta_ij) / pi_j. Throws NotIn15a otherwise.
PassageTimes mfpt_simplified_15a(const StochasticChain& chain,
                                 const GInverse& ginv);

// Element route for arbitrary inverses, with the row-sum correction:
// m_ij = (g_jj - g_ij + delta_ij) / pi_j + (g_i. - g_j.).
PassageTimes mfpt_elementwise_general(const GInverse& ginv, const Vector& pi);

// delta_j = sum_{k != j} beta_k m_kj, eta_j the same with uniform weights,
// tau_j = sum_k pi_k m_kj. Throws BadBeta unless beta sums to one.
DerivedVectors derived_vectors(const StochasticChain& chain, const Matrix& m,
                               const Vector& beta);

// Rebuilds the g-inverse G(alpha, beta, gamma) element-wise from the
// stationary vector and mean first passage times alone.
Matrix reconstruct_ginverse(const GInverseParams& params, const Vector& pi,
                            const Matrix& m);

// The special-case element formulas for the named sub-families. Identifiers
// follow the condition-class notation: e.g. "15a" is the class satisfying
// conditions 1 and 5a.
enum class SpecialCase {
  class_15a,    // (e, beta, gamma)
  class_125a,   // (e, beta, -1)
  class_145a,   // (e, e/m, gamma)
  class_1245a,  // (e, e/m, -1)
  class_15,     // (e, pi, gamma)
  fundamental,  // (e, pi, 0)
  group,        // (e, pi, -1)
  class_13,     // (pi/pi^T pi, beta, gamma)
  moore_penrose  // (pi/pi^T pi, e/m, -1)
};

struct SpecialCaseParams {
  std::optional<Vector> beta;
  std::optional<double> gamma;
};

SpecialCase parse_special_case(const std::string& name);
std::string special_case_name(SpecialCase c);

// Free parameters the case does not pin must be supplied in extra;
// anything else is ignored.
Matrix reconstruct_special(SpecialCase c, const StochasticChain& chain,
                           const Matrix& m, const SpecialCaseParams& extra);

// Row sums of G(alpha, beta, gamma) from chain properties alone:
// g_i. = 1 + gamma + sum_{k != i} pi_k alpha_k m_ik - sum_k pi_k alpha_k delta_k.
Vector row_sums_formula(const GInverseParams& params, const Vector& pi,
                        const Matrix& m);

}  // namespace ginv

#endif  // GINV_PASSAGE_HPP
