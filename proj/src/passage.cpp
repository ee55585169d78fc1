#include "ginv/passage.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ginv/errors.hpp"

namespace ginv {

namespace {

constexpr double kCheckTol = 1e-8;

double scale_of(const Matrix& a) { return std::max(1.0, max_abs(a)); }

// delta_j = sum_{k != j} w_k m_kj for an arbitrary weight vector w.
Vector weighted_column_sums(const Matrix& m, const Vector& w) {
  const std::size_t n = m.rows();
  Vector delta(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) acc += w[k] * m(k, j);
    }
    delta[j] = acc;
  }
  return delta;
}

void check_passage_invariants(const StochasticChain& chain, const Matrix& m,
                              const std::string& route) {
  const std::size_t n = chain.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(m(i, j)) || !(m(i, j) > 0.0)) {
        throw RouteDisagreement(route + ": nonpositive passage time at (" +
                                std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
      }
    }
    if (std::abs(m(i, i) * chain.pi()[i] - 1.0) > kCheckTol) {
      throw RouteDisagreement(route +
                              ": diagonal is not the mean recurrence time");
    }
  }
  // (I - P) M = E - P M_d ties every route back to the step equations.
  const Matrix lhs = chain.kernel() * m;
  const Matrix rhs = Matrix::ones(n, n) - chain.transition() * diagonal_part(m);
  if (max_abs_diff(lhs, rhs) > kCheckTol * scale_of(m)) {
    throw RouteDisagreement(route + ": passage-time matrix equation residual "
                                    "exceeds tolerance");
  }
}

void require_consistent(const StochasticChain& chain, const GInverse& ginv) {
  if (ginv.matrix.rows() != chain.size() || !ginv.matrix.square()) {
    throw ShapeMismatch("g-inverse shape does not match the chain");
  }
  const Matrix k = chain.kernel();
  if (max_abs_diff(k * ginv.matrix * k, k) >
      kCheckTol * scale_of(ginv.matrix)) {
    throw NotAGInverse("matrix is not a g-inverse of this chain's kernel");
  }
}

}  // namespace

PassageTimes mfpt_direct(const StochasticChain& chain) {
  const std::size_t n = chain.size();
  const Matrix& p = chain.transition();
  Matrix m(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    m(j, j) = 1.0 / chain.pi()[j];
    if (n == 1) continue;
    // (I - P) with row and column j deleted; unknowns are m_ij for i != j.
    Matrix a(n - 1, n - 1);
    std::vector<std::size_t> idx;
    idx.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) idx.push_back(i);
    for (std::size_t r = 0; r < n - 1; ++r)
      for (std::size_t c = 0; c < n - 1; ++c)
        a(r, c) = (idx[r] == idx[c] ? 1.0 : 0.0) - p(idx[r], idx[c]);
    const Vector x = solve_linear(a, Vector(n - 1, 1.0));
    for (std::size_t r = 0; r < n - 1; ++r) m(idx[r], j) = x[r];
  }
  check_passage_invariants(chain, m, "direct");
  return PassageTimes{std::move(m)};
}

PassageTimes mfpt_from_ginverse(const StochasticChain& chain,
                                const GInverse& ginv) {
  require_consistent(chain, ginv);
  const std::size_t n = chain.size();
  const Matrix& g = ginv.matrix;
  const Matrix projector = chain.stationary_projector();
  const Matrix ones = Matrix::ones(n, n);
  const Matrix g_proj = g * projector;
  const Matrix term = g_proj - ones * diagonal_part(g_proj) +
                      Matrix::identity(n) - g + ones * diagonal_part(g);
  Matrix m = term * chain.recurrence_diag();
  check_passage_invariants(chain, m, "ginverse");
  return PassageTimes{std::move(m)};
}

PassageTimes mfpt_from_deflated(const StochasticChain& chain,
                                const GInverse& ginv) {
  require_consistent(chain, ginv);
  const std::size_t n = chain.size();
  const Matrix h =
      ginv.matrix * (Matrix::identity(n) - chain.stationary_projector());
  const Matrix ones = Matrix::ones(n, n);
  Matrix m = (Matrix::identity(n) - h + ones * diagonal_part(h)) *
             chain.recurrence_diag();
  check_passage_invariants(chain, m, "deflated");
  return PassageTimes{std::move(m)};
}

PassageTimes mfpt_simplified_15a(const StochasticChain& chain,
                                 const GInverse& ginv) {
  require_consistent(chain, ginv);
  if (!classify(chain, ginv).cond5a) {
    throw NotIn15a(
        "the row-sum shortcut requires an inverse with alpha = e");
  }
  const std::size_t n = chain.size();
  const Matrix& g = ginv.matrix;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) =
          (g(j, j) - g(i, j) + (i == j ? 1.0 : 0.0)) / chain.pi()[j];
  check_passage_invariants(chain, m, "simplified");
  return PassageTimes{std::move(m)};
}

PassageTimes mfpt_elementwise_general(const GInverse& ginv, const Vector& pi) {
  const std::size_t n = pi.size();
  const Matrix& g = ginv.matrix;
  if (g.rows() != n || !g.square()) {
    throw ShapeMismatch("g-inverse shape does not match pi");
  }
  const Vector row_sums = g.row_sums();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = (g(j, j) - g(i, j) + (i == j ? 1.0 : 0.0)) / pi[j] +
                (row_sums[i] - row_sums[j]);
  return PassageTimes{std::move(m)};
}

DerivedVectors derived_vectors(const StochasticChain& chain, const Matrix& m,
                               const Vector& beta) {
  if (beta.size() != chain.size()) {
    throw ShapeMismatch("beta must have one entry per state");
  }
  if (std::abs(sum(beta) - 1.0) > 1e-9) {
    throw BadBeta("beta components must sum to 1, got " +
                  std::to_string(sum(beta)));
  }
  DerivedVectors d;
  d.delta = weighted_column_sums(m, beta);
  d.eta = weighted_column_sums(
      m, Vector(chain.size(), 1.0 / static_cast<double>(chain.size())));
  d.tau = chain.pi() * m;
  return d;
}

namespace {

void require_admissible(const GInverseParams& params, const Vector& pi,
                        const Matrix& m) {
  if (params.alpha.size() != pi.size() || params.beta.size() != pi.size() ||
      m.rows() != pi.size() || !m.square()) {
    throw ShapeMismatch("parameter/matrix sizes disagree");
  }
  if (std::abs(dot(pi, params.alpha) - 1.0) > 1e-9) {
    throw DegenerateParameters("pi^T alpha must equal 1");
  }
  if (std::abs(sum(params.beta) - 1.0) > 1e-9) {
    throw DegenerateParameters("beta^T e must equal 1");
  }
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (std::abs(m(j, j) * pi[j] - 1.0) > kCheckTol) {
      throw DegenerateParameters(
          "mean passage diagonal is inconsistent with pi");
    }
  }
}

}  // namespace

Matrix reconstruct_ginverse(const GInverseParams& params, const Vector& pi,
                            const Matrix& m) {
  require_admissible(params, pi, m);
  const std::size_t n = pi.size();
  const Vector delta = weighted_column_sums(m, params.beta);

  // pi- and alpha-weighted aggregates shared by every entry.
  double delta_mix = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    delta_mix += pi[k] * params.alpha[k] * delta[k];
  Vector row_mix(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) acc += pi[k] * params.alpha[k] * m(i, k);
    row_mix[i] = acc;
  }

  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double entry = 1.0 + params.gamma + delta[j] + row_mix[i] - delta_mix;
      if (i != j) entry -= m(i, j);
      g(i, j) = entry * pi[j];
    }
  }
  return g;
}

SpecialCase parse_special_case(const std::string& name) {
  if (name == "15a") return SpecialCase::class_15a;
  if (name == "125a") return SpecialCase::class_125a;
  if (name == "145a") return SpecialCase::class_145a;
  if (name == "1245a") return SpecialCase::class_1245a;
  if (name == "15") return SpecialCase::class_15;
  if (name == "z") return SpecialCase::fundamental;
  if (name == "group") return SpecialCase::group;
  if (name == "13") return SpecialCase::class_13;
  if (name == "mp") return SpecialCase::moore_penrose;
  throw UnknownCase("unknown special case '" + name + "'");
}

std::string special_case_name(SpecialCase c) {
  switch (c) {
    case SpecialCase::class_15a: return "15a";
    case SpecialCase::class_125a: return "125a";
    case SpecialCase::class_145a: return "145a";
    case SpecialCase::class_1245a: return "1245a";
    case SpecialCase::class_15: return "15";
    case SpecialCase::fundamental: return "z";
    case SpecialCase::group: return "group";
    case SpecialCase::class_13: return "13";
    case SpecialCase::moore_penrose: return "mp";
  }
  throw UnknownCase("unhandled special case");
}

Matrix reconstruct_special(SpecialCase c, const StochasticChain& chain,
                           const Matrix& m, const SpecialCaseParams& extra) {
  const std::size_t n = chain.size();
  const Vector& pi = chain.pi();

  const auto need_beta = [&]() -> const Vector& {
    if (!extra.beta || extra.beta->size() != n) {
      throw DegenerateParameters("this case requires a beta vector");
    }
    if (std::abs(sum(*extra.beta) - 1.0) > 1e-9) {
      throw DegenerateParameters("beta components must sum to 1");
    }
    return *extra.beta;
  };
  const auto need_gamma = [&]() -> double {
    if (!extra.gamma) {
      throw DegenerateParameters("this case requires gamma");
    }
    return *extra.gamma;
  };

  // Off-diagonal entries subtract m_ij; diagonals do not.
  const auto fill = [&](const Vector& column_term) {
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        g(i, j) = pi[j] * (column_term[j] - (i != j ? m(i, j) : 0.0));
    return g;
  };

  const Vector uniform(n, 1.0 / static_cast<double>(n));
  switch (c) {
    case SpecialCase::class_15a: {
      const Vector delta = weighted_column_sums(m, need_beta());
      const double gamma = need_gamma();
      Vector term(n);
      for (std::size_t j = 0; j < n; ++j) term[j] = 1.0 + gamma + delta[j];
      return fill(term);
    }
    case SpecialCase::class_125a: {
      return fill(weighted_column_sums(m, need_beta()));
    }
    case SpecialCase::class_145a: {
      const Vector eta = weighted_column_sums(m, uniform);
      const double gamma = need_gamma();
      Vector term(n);
      for (std::size_t j = 0; j < n; ++j) term[j] = 1.0 + gamma + eta[j];
      return fill(term);
    }
    case SpecialCase::class_1245a: {
      return fill(weighted_column_sums(m, uniform));
    }
    case SpecialCase::class_15: {
      const Vector tau = pi * m;
      const double gamma = need_gamma();
      Vector term(n);
      for (std::size_t j = 0; j < n; ++j) term[j] = tau[j] + gamma;
      return fill(term);
    }
    case SpecialCase::fundamental: {
      return fill(pi * m);
    }
    case SpecialCase::group: {
      const Vector tau = pi * m;
      Vector term(n);
      for (std::size_t j = 0; j < n; ++j) term[j] = tau[j] - 1.0;
      return fill(term);
    }
    case SpecialCase::class_13:
    case SpecialCase::moore_penrose: {
      // alpha = pi / pi^T pi, so the row correction uses pi_k^2 weights.
      Vector beta = c == SpecialCase::class_13 ? need_beta() : uniform;
      const double gamma =
          c == SpecialCase::class_13 ? need_gamma() : -1.0;
      const Vector delta = weighted_column_sums(m, beta);
      const double pi_sq = dot(pi, pi);
      double delta_mix = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        delta_mix += pi[k] * pi[k] * delta[k];
      delta_mix /= pi_sq;
      Matrix g(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        double row_mix = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) row_mix += pi[k] * pi[k] * m(i, k);
        row_mix /= pi_sq;
        for (std::size_t j = 0; j < n; ++j) {
          double entry = 1.0 + gamma + delta[j] + row_mix - delta_mix;
          if (i != j) entry -= m(i, j);
          g(i, j) = entry * pi[j];
        }
      }
      return g;
    }
  }
  throw UnknownCase("unhandled special case");
}

Vector row_sums_formula(const GInverseParams& params, const Vector& pi,
                        const Matrix& m) {
  require_admissible(params, pi, m);
  const std::size_t n = pi.size();
  const Vector delta = weighted_column_sums(m, params.beta);
  double delta_mix = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    delta_mix += pi[k] * params.alpha[k] * delta[k];

  Vector sums(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 1.0 + params.gamma - delta_mix;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) acc += pi[k] * params.alpha[k] * m(i, k);
    sums[i] = acc;
  }
  return sums;
}

}  // namespace ginv
