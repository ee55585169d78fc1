#include "ginv/moments.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ginv/errors.hpp"
#include "ginv/passage.hpp"

namespace ginv {

namespace {

constexpr double kCheckTol = 1e-8;
constexpr double kKemenySpreadTol = 1e-9;

double scale_of(const Vector& v) { return std::max(1.0, inf_norm(v)); }

void require_agreement(const std::vector<std::pair<std::string, Vector>>& routes) {
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      const double diff = max_abs_diff(routes[a].second, routes[b].second);
      const double scale =
          std::max(scale_of(routes[a].second), scale_of(routes[b].second));
      if (diff > kCheckTol * scale) {
        throw RouteDisagreement("routes '" + routes[a].first + "' and '" +
                                routes[b].first + "' differ by " +
                                std::to_string(diff));
      }
    }
  }
}

}  // namespace

KemenyRoute parse_kemeny_route(const std::string& name) {
  if (name == "definition") return KemenyRoute::definition;
  if (name == "general_g") return KemenyRoute::general_g;
  if (name == "trace_15a") return KemenyRoute::trace_15a;
  if (name == "delta_sum") return KemenyRoute::delta_sum;
  throw UnknownCase("unknown kemeny route '" + name + "'");
}

std::string kemeny_route_name(KemenyRoute route) {
  switch (route) {
    case KemenyRoute::definition: return "definition";
    case KemenyRoute::general_g: return "general_g";
    case KemenyRoute::trace_15a: return "trace_15a";
    case KemenyRoute::delta_sum: return "delta_sum";
  }
  throw UnknownCase("unhandled kemeny route");
}

SecondMoments second_moments(const StochasticChain& chain, const Matrix& m) {
  SecondMoments out;
  out.recurrence_diag =
      second_moment_diag_from_tau(chain.pi(), chain.pi() * m);
  out.full = second_moment_matrix(chain, m, out.recurrence_diag);
  return out;
}

Vector second_moment_diag_from_tau(const Vector& pi, const Vector& tau) {
  if (pi.size() != tau.size()) {
    throw ShapeMismatch("pi and tau lengths differ");
  }
  Vector md2(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j)
    md2[j] = (2.0 * tau[j] - 1.0) / pi[j];
  return md2;
}

Vector second_moment_diag_from_ginverse(const StochasticChain& chain,
                                        const GInverse& ginv) {
  const std::size_t n = chain.size();
  const Vector& pi = chain.pi();
  const Matrix& g = ginv.matrix;
  const ConditionSet cls = classify(chain, ginv);

  std::vector<std::pair<std::string, Vector>> routes;
  std::size_t tightest = 0;

  // General route: D + 2 D {(I - Pi) G (I - Pi)}_d D.
  {
    const Matrix centering =
        Matrix::identity(n) - chain.stationary_projector();
    const Matrix sandwiched = centering * g * centering;
    Vector md2(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 1.0 / pi[j];
      md2[j] = d + 2.0 * d * sandwiched(j, j) * d;
    }
    routes.emplace_back("general", std::move(md2));
  }

  const Vector row_sums = g.row_sums();
  const Vector pi_g = pi * g;
  if (cls.cond5a) {
    // D + 2 D G_d D - 2 D (Pi G)_d D.
    Vector md2(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 1.0 / pi[j];
      md2[j] = d + 2.0 * d * g(j, j) * d - 2.0 * d * pi_g[j] * d;
    }
    routes.emplace_back("constant-row-sums", std::move(md2));
    tightest = routes.size() - 1;
  }
  if (cls.cond5b) {
    // D + 2 D G_d D - 2 D (G Pi)_d D, where (G Pi)_jj = g_j. pi_j.
    Vector md2(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 1.0 / pi[j];
      md2[j] = d + 2.0 * d * g(j, j) * d - 2.0 * d * row_sums[j] * pi[j] * d;
    }
    routes.emplace_back("stationary-left", std::move(md2));
    tightest = routes.size() - 1;
  }
  if (cls.cond5) {
    // 2 D G_d D - (1 + 2 gamma) D.
    Vector md2(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 1.0 / pi[j];
      md2[j] = 2.0 * d * g(j, j) * d - (1.0 + 2.0 * ginv.params.gamma) * d;
    }
    routes.emplace_back("commuting", std::move(md2));
    tightest = routes.size() - 1;
  }

  const Vector tau = pi * mfpt_direct(chain).mean;
  routes.emplace_back("tau", second_moment_diag_from_tau(pi, tau));

  require_agreement(routes);
  return routes[tightest].second;
}

Matrix second_moment_matrix(const StochasticChain& chain, const Matrix& m,
                            const Vector& recurrence_second) {
  const std::size_t n = chain.size();
  if (m.rows() != n || !m.square() || recurrence_second.size() != n) {
    throw ShapeMismatch("passage-time inputs do not match the chain");
  }
  const Matrix& p = chain.transition();
  // Right-hand side of (I - P) M2 = E + 2 P (M - M_d) - P Md2.
  const Matrix rhs_full = Matrix::ones(n, n) +
                          2.0 * (p * (m - diagonal_part(m))) -
                          p * diagonal_matrix(recurrence_second);

  Matrix m2(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    m2(j, j) = recurrence_second[j];
    if (n == 1) continue;
    std::vector<std::size_t> idx;
    idx.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) idx.push_back(i);
    Matrix a(n - 1, n - 1);
    Vector rhs(n - 1);
    for (std::size_t r = 0; r < n - 1; ++r) {
      for (std::size_t c = 0; c < n - 1; ++c)
        a(r, c) = (idx[r] == idx[c] ? 1.0 : 0.0) - p(idx[r], idx[c]);
      rhs[r] = rhs_full(idx[r], j) + p(idx[r], j) * recurrence_second[j];
    }
    const Vector x = solve_linear(a, rhs);
    for (std::size_t r = 0; r < n - 1; ++r) m2(idx[r], j) = x[r];
  }

  // The deleted rows only hold when the pinned diagonal is consistent with M.
  const Matrix residual = chain.kernel() * m2 - rhs_full;
  if (max_abs(residual) > kCheckTol * std::max(1.0, max_abs(m2))) {
    throw DegenerateParameters(
        "supplied recurrence second moments are inconsistent with M");
  }
  return m2;
}

Vector tau_from_ginverse(const StochasticChain& chain, const GInverse& ginv) {
  const std::size_t n = chain.size();
  const Vector& pi = chain.pi();
  const Matrix& g = ginv.matrix;
  const ConditionSet cls = classify(chain, ginv);

  std::vector<std::pair<std::string, Vector>> routes;

  // General form: e + (pi^T G e) e - (Pi G)_d D e - (G E)_d e + G_d D e.
  {
    const Matrix pi_g_matrix = chain.stationary_projector() * g;
    const Vector row_sums = g.row_sums();
    const double mixed = dot(pi, row_sums);
    Vector tau(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 1.0 / pi[j];
      tau[j] =
          1.0 + mixed - pi_g_matrix(j, j) * d - row_sums[j] + g(j, j) * d;
    }
    routes.emplace_back("general", std::move(tau));
  }

  // Element form of the same identity, assembled from scalar sums.
  {
    Vector tau(n);
    for (std::size_t j = 0; j < n; ++j) {
      double mixed = 0.0;
      double column = 0.0;
      double row_j = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double row_i = 0.0;
        for (std::size_t k = 0; k < n; ++k) row_i += g(i, k);
        mixed += pi[i] * row_i;
        column += pi[i] * g(i, j);
        if (i == j) row_j = row_i;
      }
      tau[j] = 1.0 + mixed - row_j + (g(j, j) - column) / pi[j];
    }
    routes.emplace_back("element", std::move(tau));
  }

  if (cls.cond5a) {
    const Vector pi_g = pi * g;
    Vector tau(n);
    for (std::size_t j = 0; j < n; ++j)
      tau[j] = 1.0 + (g(j, j) - pi_g[j]) / pi[j];
    routes.emplace_back("constant-row-sums", std::move(tau));
  }
  if (cls.cond5b) {
    const Vector row_sums = g.row_sums();
    Vector tau(n);
    for (std::size_t j = 0; j < n; ++j)
      tau[j] = 1.0 - row_sums[j] + g(j, j) / pi[j];
    routes.emplace_back("stationary-left", std::move(tau));
  }
  if (cls.cond5) {
    Vector tau(n);
    for (std::size_t j = 0; j < n; ++j)
      tau[j] = g(j, j) / pi[j] - ginv.params.gamma;
    routes.emplace_back("commuting", std::move(tau));
  }

  routes.emplace_back("passage-times", pi * mfpt_direct(chain).mean);

  require_agreement(routes);
  return routes[0].second;
}

Matrix ginverse_from_second_moments(const StochasticChain& chain, double gamma,
                                    const Matrix& m,
                                    const Vector& recurrence_second) {
  const std::size_t n = chain.size();
  if (m.rows() != n || !m.square() || recurrence_second.size() != n) {
    throw ShapeMismatch("inputs do not match the chain");
  }
  const Vector& pi = chain.pi();
  Matrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double half = (pi[j] * recurrence_second[j] + 1.0) / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      double entry = gamma + half;
      if (i != j) entry -= m(i, j);
      g(i, j) = pi[j] * entry;
    }
  }
  return g;
}

namespace {

KemenyConstant kemeny_constant_unchecked(const StochasticChain& chain,
                                         KemenyRoute route,
                                         const GInverse* ginv) {
  const std::size_t n = chain.size();
  const Vector& pi = chain.pi();
  switch (route) {
    case KemenyRoute::definition: {
      const Matrix m = mfpt_direct(chain).mean;
      Vector per_start(n);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += pi[j] * m(i, j);
        per_start[i] = acc;
      }
      double lo = per_start[0];
      double hi = per_start[0];
      for (double k : per_start) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
      if (hi - lo > kKemenySpreadTol * std::max(1.0, hi)) {
        throw RouteDisagreement(
            "pi-weighted passage sums vary with the starting state by " +
            std::to_string(hi - lo));
      }
      return {per_start[0], route};
    }
    case KemenyRoute::general_g: {
      if (ginv == nullptr) {
        throw DegenerateParameters("this route requires a g-inverse");
      }
      const Matrix& g = ginv->matrix;
      const Vector row_sums = g.row_sums();
      double acc = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        acc += g(j, j) - row_sums[j] * pi[j];
      return {acc, route};
    }
    case KemenyRoute::trace_15a: {
      if (ginv == nullptr) {
        throw DegenerateParameters("this route requires a g-inverse");
      }
      if (!classify(chain, *ginv).cond5a) {
        throw NotIn15a("the trace route requires an inverse with alpha = e");
      }
      return {ginv->matrix.trace() - ginv->params.gamma, route};
    }
    case KemenyRoute::delta_sum: {
      const Matrix m = mfpt_direct(chain).mean;
      const Vector& beta = ginv != nullptr ? ginv->params.beta : pi;
      const DerivedVectors d = derived_vectors(chain, m, beta);
      double acc = 1.0;
      for (std::size_t k = 0; k < n; ++k) acc += pi[k] * d.delta[k];
      return {acc, route};
    }
  }
  throw UnknownCase("unhandled kemeny route");
}

}  // namespace

KemenyConstant kemeny_constant(const StochasticChain& chain, KemenyRoute route,
                               const GInverse* ginv) {
  const KemenyConstant k = kemeny_constant_unchecked(chain, route, ginv);
  // Strictly above one for any chain with at least two states: the sum
  // 1 + sum_{j != i} pi_j m_ij has a positive term.
  if (chain.size() >= 2 && !(k.value > 1.0)) {
    throw RouteDisagreement("computed Kemeny constant " +
                            std::to_string(k.value) + " is not above 1");
  }
  return k;
}

}  // namespace ginv
