#ifndef GINV_MOMENTS_HPP
#define GINV_MOMENTS_HPP

#include <optional>
#include <string>

#include "ginv/chain.hpp"
#include "ginv/ginverse.hpp"
#include "ginv/matrix.hpp"

namespace ginv {

struct SecondMoments {
  Vector recurrence_diag;         // m_jj^(2)
  std::optional<Matrix> full;     // m_ij^(2) when computed
};

// Diagonal via tau = pi^T M, then the full matrix with that diagonal pinned.
SecondMoments second_moments(const StochasticChain& chain, const Matrix& m);

enum class KemenyRoute {
  definition,   // pi-weighted row of the passage-time matrix
  general_g,    // 1 + sum_j (g_jj - g_j. pi_j), any g-inverse
  trace_15a,    // tr(G) - gamma, constant-row-sum inverses only
  delta_sum,    // 1 + sum_k pi_k delta_k
};

KemenyRoute parse_kemeny_route(const std::string& name);
std::string kemeny_route_name(KemenyRoute route);

struct KemenyConstant {
  double value = 0.0;
  KemenyRoute route = KemenyRoute::definition;
};

// m_jj^(2) = (2 tau_j - 1) / pi_j.
Vector second_moment_diag_from_tau(const Vector& pi, const Vector& tau);

// Evaluates the general centered-sandwich formula plus every specialization
// the inverse's class admits, checks them against the tau route, and returns
// the tightest applicable one. Disagreement is fatal.
Vector second_moment_diag_from_ginverse(const StochasticChain& chain,
                                        const GInverse& ginv);

// Full second-moment matrix by per-column solves with the diagonal pinned
// to the supplied values (the same deletion scheme as the direct
// passage-time route).
Matrix second_moment_matrix(const StochasticChain& chain, const Matrix& m,
                            const Vector& recurrence_second);

// tau by the general g-inverse expression, its element form, and every
// applicable specialization; all are checked against pi^T M.
Vector tau_from_ginverse(const StochasticChain& chain, const GInverse& ginv);

// Element-wise build of the (e, pi, gamma) inverse from second moments of
// the recurrence times: gamma = 0 gives Z, gamma = -1 the group inverse.
Matrix ginverse_from_second_moments(const StochasticChain& chain, double gamma,
                                    const Matrix& m,
                                    const Vector& recurrence_second);

// Kemeny's constant by the requested route. The definition route also
// verifies that the pi-weighted row sums of M agree across starting states.
KemenyConstant kemeny_constant(const StochasticChain& chain, KemenyRoute route,
                               const GInverse* ginv = nullptr);

}  // namespace ginv

#endif  // GINV_MOMENTS_HPP
