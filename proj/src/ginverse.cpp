#include "ginv/ginverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "ginv/errors.hpp"

namespace ginv {

namespace {

constexpr double kDegenerate = 1e-12;  // |pi^T t|, |u^T e| cutoff
constexpr double kVerifyTol = 1e-9;    // construction postconditions
constexpr double kParamTol = 1e-8;     // parameter recovery and class tests

double scale_of(const Matrix& g) { return std::max(1.0, max_abs(g)); }

double scale_of(const Vector& a, const Vector& b) {
  return std::max({1.0, inf_norm(a), inf_norm(b)});
}

bool vectors_match(const Vector& a, const Vector& b) {
  return max_abs_diff(a, b) <= kParamTol * scale_of(a, b);
}

// Residual of the defining one-condition identity (I-P) G (I-P) = I-P.
double condition1_residual(const StochasticChain& chain, const Matrix& g) {
  const Matrix k = chain.kernel();
  return max_abs_diff(k * g * k, k);
}

void require_one_condition(const StochasticChain& chain, const Matrix& g) {
  if (!g.square() || g.rows() != chain.size()) {
    throw ShapeMismatch("g-inverse shape does not match the chain");
  }
  const double residual = condition1_residual(chain, g);
  if (residual > kParamTol * scale_of(g)) {
    throw NotAGInverse("one-condition residual " + std::to_string(residual));
  }
}

double spread(const Vector& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

Matrix build_base_inverse(const StochasticChain& chain, const Vector& t,
                          const Vector& u) {
  const std::size_t m = chain.size();
  if (t.size() != m || u.size() != m) {
    throw ShapeMismatch("t and u must have one entry per state");
  }
  const double pi_t = dot(chain.pi(), t);
  const double u_e = sum(u);
  if (std::abs(pi_t) <= kDegenerate) {
    throw DegenerateParameters("pi^T t is numerically zero");
  }
  if (std::abs(u_e) <= kDegenerate) {
    throw DegenerateParameters("u^T e is numerically zero");
  }
  const Matrix base = invert(chain.kernel() + outer(t, u));

  // The inverse must map t to e / (u^T e) and pull u^T back to pi^T / (pi^T t).
  const double tol = kVerifyTol * scale_of(base);
  const Vector expected_left = (1.0 / u_e) * ones_vector(m);
  const Vector expected_right = (1.0 / pi_t) * chain.pi();
  if (max_abs_diff(base * t, expected_left) > tol ||
      max_abs_diff(u * base, expected_right) > tol) {
    throw DegenerateParameters(
        "perturbed kernel inverse failed its defining identities; "
        "t or u is too close to degenerate");
  }
  return base;
}

GInverse build_one_condition(const StochasticChain& chain, const Vector& t,
                             const Vector& u, const Vector& f,
                             const Vector& g) {
  const Matrix base = build_base_inverse(chain, t, u);
  const Matrix full =
      base + outer(ones_vector(chain.size()), f) + outer(g, chain.pi());
  return GInverse{full, characterize(chain, full)};
}

GInverse build_parametric(const StochasticChain& chain,
                          const GInverseParams& params) {
  const std::size_t m = chain.size();
  if (params.alpha.size() != m || params.beta.size() != m) {
    throw ShapeMismatch("parameter vectors must have one entry per state");
  }
  if (std::abs(dot(chain.pi(), params.alpha) - 1.0) > kVerifyTol) {
    throw DegenerateParameters("pi^T alpha must equal 1");
  }
  if (std::abs(sum(params.beta) - 1.0) > kVerifyTol) {
    throw DegenerateParameters("beta^T e must equal 1");
  }
  Matrix g = invert(chain.kernel() + outer(params.alpha, params.beta));
  if (params.gamma != 0.0) {
    g += params.gamma * chain.stationary_projector();
  }

  const GInverseParams recovered = characterize(chain, g);
  if (!vectors_match(recovered.alpha, params.alpha) ||
      !vectors_match(recovered.beta, params.beta) ||
      std::abs(recovered.gamma - params.gamma) > kParamTol) {
    throw ClassificationInconsistent(
        "parametric construction did not round-trip");
  }
  return GInverse{std::move(g), recovered};
}

GInverseParams characterize(const StochasticChain& chain, const Matrix& g) {
  require_one_condition(chain, g);
  const std::size_t m = chain.size();
  const Matrix k = chain.kernel();
  const Matrix identity = Matrix::identity(m);

  GInverseParams params;
  params.alpha = (identity - k * g) * ones_vector(m);
  params.beta = chain.pi() * (identity - g * k);

  // gamma + 1 has three equivalent expressions; silent disagreement would
  // hide a broken inverse, so it is fatal rather than averaged away.
  const Vector g_alpha = g * params.alpha;
  const double gamma_pi = dot(chain.pi(), g_alpha) - 1.0;
  const double gamma_e = dot(params.beta, g * ones_vector(m)) - 1.0;
  const double gamma_both = dot(params.beta, g_alpha) - 1.0;
  if (std::abs(gamma_pi - gamma_both) > kParamTol ||
      std::abs(gamma_e - gamma_both) > kParamTol) {
    throw ClassificationInconsistent(
        "gamma estimates disagree: " + std::to_string(gamma_pi) + ", " +
        std::to_string(gamma_e) + ", " + std::to_string(gamma_both));
  }
  params.gamma = gamma_both;
  return params;
}

ConditionSet classify(const StochasticChain& chain, const GInverse& ginv) {
  const std::size_t m = chain.size();
  const Matrix& g = ginv.matrix;
  const GInverseParams& p = ginv.params;
  const Vector& pi = chain.pi();

  // Parameter tests.
  ConditionSet set;
  set.cond2 = std::abs(p.gamma + 1.0) <= kParamTol;
  set.cond3 = vectors_match(p.alpha, (1.0 / dot(pi, pi)) * pi);
  set.cond4 =
      vectors_match(p.beta, (1.0 / static_cast<double>(m)) * ones_vector(m));
  set.cond5a = vectors_match(p.alpha, ones_vector(m));
  set.cond5b = vectors_match(p.beta, pi);
  set.cond5 = set.cond5a && set.cond5b;

  // Direct matrix tests of the same conditions.
  const Matrix k = chain.kernel();
  const Matrix kg = k * g;
  const Matrix gk = g * k;
  const double tol = kParamTol * scale_of(g) * std::max(1.0, inf_norm(k));
  const bool direct2 = max_abs_diff(g * kg, g) <= tol;
  const bool direct3 = max_abs_diff(kg.transpose(), kg) <= tol;
  const bool direct4 = max_abs_diff(gk.transpose(), gk) <= tol;
  const bool direct5 = max_abs_diff(kg, gk) <= tol;
  const Vector row_sums = g * ones_vector(m);
  const bool direct5a = spread(row_sums) <= kParamTol * scale_of(g);
  const Vector pi_g = pi * g;
  const bool direct5b =
      max_abs_diff(pi_g, dot(pi, row_sums) * pi) <= kParamTol * scale_of(g);

  if (set.cond2 != direct2 || set.cond3 != direct3 || set.cond4 != direct4 ||
      set.cond5 != direct5 || set.cond5a != direct5a ||
      set.cond5b != direct5b) {
    throw ClassificationInconsistent(
        "parameter-based and matrix-based condition tests disagree");
  }
  return set;
}

GInverse fundamental_matrix(const StochasticChain& chain) {
  GInverse z = build_parametric(
      chain, GInverseParams{ones_vector(chain.size()), chain.pi(), 0.0});
  const double tol = kVerifyTol * scale_of(z.matrix);
  if (max_abs_diff(z.matrix * ones_vector(chain.size()),
                   ones_vector(chain.size())) > tol ||
      max_abs_diff(chain.pi() * z.matrix, chain.pi()) > tol) {
    throw ClassificationInconsistent(
        "fundamental matrix failed Ze = e or pi^T Z = pi^T");
  }
  return z;
}

GInverse group_inverse(const StochasticChain& chain) {
  const std::size_t m = chain.size();
  const GInverse z = fundamental_matrix(chain);
  Matrix sharp = z.matrix - chain.stationary_projector();

  const double tol = kVerifyTol * scale_of(sharp);
  if (inf_norm(sharp * ones_vector(m)) > tol ||
      inf_norm(chain.pi() * sharp) > tol) {
    throw ClassificationInconsistent(
        "group inverse failed A# e = 0 or pi^T A# = 0");
  }
  const Matrix k = chain.kernel();
  if (max_abs_diff(k * sharp * k, k) > tol ||
      max_abs_diff(sharp * k * sharp, sharp) > tol ||
      max_abs_diff(k * sharp, sharp * k) > tol) {
    throw ClassificationInconsistent(
        "group inverse failed one of its defining conditions");
  }
  GInverseParams params = characterize(chain, sharp);
  return GInverse{std::move(sharp), std::move(params)};
}

GInverse moore_penrose(const StochasticChain& chain) {
  const std::size_t m = chain.size();
  const Vector& pi = chain.pi();
  const Vector e = ones_vector(m);
  const double pi_sq = dot(pi, pi);
  const Matrix k = chain.kernel();

  // Two published closed forms for the same unique matrix.
  const Matrix direct =
      invert(k + outer(pi, e)) -
      (1.0 / (static_cast<double>(m) * pi_sq)) * outer(e, pi);
  const double c = 1.0 / std::sqrt(static_cast<double>(m) * pi_sq);
  const Matrix scaled = invert(k + c * outer(pi, e)) - c * outer(e, pi);

  const double tol = kVerifyTol * scale_of(direct);
  if (max_abs_diff(direct, scaled) > tol) {
    throw MPFormsDisagree("the two closed forms differ by " +
                          std::to_string(max_abs_diff(direct, scaled)));
  }

  const Matrix kg = k * direct;
  const Matrix gk = direct * k;
  if (max_abs_diff(kg * k, k) > tol || max_abs_diff(direct * kg, direct) > tol ||
      max_abs_diff(kg.transpose(), kg) > tol ||
      max_abs_diff(gk.transpose(), gk) > tol) {
    throw MPFormsDisagree("a defining condition of the Moore-Penrose inverse "
                          "failed verification");
  }
  GInverseParams params = characterize(chain, direct);
  return GInverse{direct, std::move(params)};
}

GInverse deflate(const StochasticChain& chain, const GInverse& ginv) {
  const std::size_t m = chain.size();
  const Matrix h =
      ginv.matrix * (Matrix::identity(m) - chain.stationary_projector());
  GInverseParams params = characterize(chain, h);
  if (!vectors_match(params.alpha, ones_vector(m)) ||
      !vectors_match(params.beta, ginv.params.beta) ||
      std::abs(params.gamma + 1.0) > kParamTol ||
      inf_norm(h * ones_vector(m)) > kVerifyTol * scale_of(h)) {
    throw ClassificationInconsistent(
        "deflation did not produce parameters (e, beta, -1)");
  }
  return GInverse{h, std::move(params)};
}

Matrix project_to_group_inverse(const StochasticChain& chain,
                                const Matrix& g) {
  require_one_condition(chain, g);
  const Matrix centering =
      Matrix::identity(chain.size()) - chain.stationary_projector();
  Matrix projected = centering * g * centering;
  const Matrix sharp = group_inverse(chain).matrix;
  if (max_abs_diff(projected, sharp) > kVerifyTol * scale_of(sharp)) {
    throw NotAGInverse(
        "centered sandwich does not reproduce the group inverse");
  }
  return projected;
}

}  // namespace ginv
