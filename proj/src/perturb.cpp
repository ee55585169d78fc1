#include "ginv/perturb.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "ginv/errors.hpp"
#include "ginv/moments.hpp"
#include "ginv/passage.hpp"

namespace ginv {

namespace {

constexpr double kRouteTol = 1e-9;
constexpr double kBoundSlack = 1e-12;

// Nudges one component at a time until the floating-point sum is exactly
// zero; rotating the target avoids rounding oscillations.
void balance_to_zero(Vector& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  for (int pass = 0; pass < 32; ++pass) {
    const double residual = sum(v);
    if (residual == 0.0) return;
    v[k] -= residual;
    if (pass >= 2) k = (k + 1) % v.size();
  }
  for (int pass = 0; pass < 64; ++pass) {
    const double residual = sum(v);
    if (residual == 0.0) return;
    v[k] = std::nextafter(v[k], residual > 0.0 ? -1.0e308 : 1.0e308);
  }
}

}  // namespace

StochasticChain validate_perturbation(const StochasticChain& chain,
                                      const Matrix& perturbation,
                                      const Tolerance& tol) {
  const std::size_t n = chain.size();
  if (perturbation.rows() != n || perturbation.cols() != n) {
    throw ShapeMismatch("perturbation shape does not match the chain");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_sum += perturbation(i, j);
    if (std::abs(row_sum) > tol.abs + tol.rel) {
      throw NotStochastic("perturbation row " + std::to_string(i + 1) +
                          " sums to " + std::to_string(row_sum) +
                          ", expected 0");
    }
  }
  return validate_chain(chain.transition() + perturbation, tol);
}

Vector perturbed_stationary(const StochasticChain& chain,
                            const Matrix& perturbation) {
  const StochasticChain perturbed =
      validate_perturbation(chain, perturbation);
  const std::size_t n = chain.size();

  const Matrix h = group_inverse(chain).matrix;
  const Matrix system = Matrix::identity(n) - perturbation * h;
  Vector pi_bar = solve_linear(system.transpose(), chain.pi());
  normalize_to_one(pi_bar);

  const Vector direct = stationary_distribution(perturbed.transition());
  if (max_abs_diff(pi_bar, direct) > kRouteTol) {
    throw RouteDisagreement(
        "fixed-point solve disagrees with the direct stationary vector by " +
        std::to_string(max_abs_diff(pi_bar, direct)));
  }
  return pi_bar;
}

Matrix n_matrix(const Matrix& mean_passage) {
  const std::size_t n = mean_passage.rows();
  if (!mean_passage.square()) {
    throw ShapeMismatch("passage-time matrix must be square");
  }
  Vector diag_inv(n);
  for (std::size_t j = 0; j < n; ++j)
    diag_inv[j] = 1.0 / mean_passage(j, j);
  const Matrix product = (mean_passage - diagonal_part(mean_passage)) *
                         diagonal_matrix(diag_inv);

  Matrix elementwise(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) elementwise(i, j) = mean_passage(i, j) / mean_passage(j, j);

  if (max_abs_diff(product, elementwise) >
      1e-12 * std::max(1.0, max_abs(product))) {
    throw RouteDisagreement("the two constructions of N differ");
  }
  return product;
}

KemenyBound kemeny_bound(const StochasticChain& chain,
                         const Matrix& perturbation) {
  KemenyBound result;
  const double k =
      kemeny_constant(chain, KemenyRoute::definition).value;
  result.bound = (k - 1.0) * inf_norm(perturbation);
  const Vector pi_bar = perturbed_stationary(chain, perturbation);
  result.lhs = one_norm(pi_bar - chain.pi());
  result.satisfied = result.lhs <= result.bound + kBoundSlack;
  return result;
}

PerturbationReport delta_routes(const StochasticChain& chain,
                                const Matrix& perturbation,
                                const GInverse& ginv) {
  const std::size_t n = chain.size();
  const Vector& pi = chain.pi();
  const Matrix& g = ginv.matrix;
  const Matrix& eps = perturbation;

  PerturbationReport report;
  report.pi_bar = perturbed_stationary(chain, eps);
  report.delta = report.pi_bar - pi;
  balance_to_zero(report.delta);

  const Vector weighted = report.pi_bar * eps;  // pi_bar^T E
  const Matrix h =
      g * (Matrix::identity(n) - chain.stationary_projector());
  const Matrix m = mfpt_direct(chain).mean;
  const bool constant_rows = classify(chain, ginv).cond5a;

  auto& routes = report.route_deltas;
  routes.emplace_back("deflated", weighted * h);

  if (constant_rows) {
    routes.emplace_back("ginverse", weighted * g);
  }

  {
    Vector diag_inv(n);
    for (std::size_t j = 0; j < n; ++j) diag_inv[j] = 1.0 / m(j, j);
    const Matrix scaled = (m - diagonal_part(m)) * diagonal_matrix(diag_inv);
    routes.emplace_back("passage_times", -1.0 * (weighted * scaled));
  }

  routes.emplace_back("n_matrix", -1.0 * (weighted * n_matrix(m)));

  {
    // Element sums against the deflated inverse H.
    Vector delta(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          acc += report.pi_bar[i] * eps(i, k) * h(k, j);
      delta[j] = acc;
    }
    routes.emplace_back("element_deflated", std::move(delta));
  }

  {
    // Element sums against G itself, corrected by its row sums.
    const Vector row_sums = g.row_sums();
    Vector delta(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double direct = 0.0;
      double correction = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          direct += report.pi_bar[i] * eps(i, k) * g(k, j);
          correction += report.pi_bar[i] * eps(i, k) * row_sums[k];
        }
      }
      delta[j] = direct - pi[j] * correction;
    }
    routes.emplace_back("element_ginverse", std::move(delta));
  }

  if (constant_rows) {
    // With constant row sums the correction term vanishes because the
    // perturbation rows sum to zero.
    Vector delta(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          acc += report.pi_bar[i] * eps(i, k) * g(k, j);
      delta[j] = acc;
    }
    routes.emplace_back("element_ginverse_simple", std::move(delta));
  }

  {
    // pi_j - pi_bar_j = pi_j sum_i sum_{k != j} pi_bar_i eps_ik m_kj.
    Vector delta(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          if (k != j) acc += report.pi_bar[i] * eps(i, k) * m(k, j);
      delta[j] = -pi[j] * acc;
    }
    routes.emplace_back("element_passage", std::move(delta));
  }

  {
    // pi_j - pi_bar_j = sum_{l != j} sum_k pi_bar_k eps_kl n_lj.
    const Matrix n_mat = n_matrix(m);
    Vector delta(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == j) continue;
        for (std::size_t k = 0; k < n; ++k)
          acc += report.pi_bar[k] * eps(k, l) * n_mat(l, j);
      }
      delta[j] = -acc;
    }
    routes.emplace_back("element_n", std::move(delta));
  }

  for (const auto& [name, delta] : routes) {
    const double diff = max_abs_diff(delta, report.delta);
    report.max_route_discrepancy =
        std::max(report.max_route_discrepancy, diff);
    if (diff > kRouteTol) {
      throw RouteDisagreement("route '" + name +
                              "' deviates from the recomputed shift by " +
                              std::to_string(diff));
    }
  }

  report.bound = kemeny_bound(chain, eps);
  return report;
}

}  // namespace ginv
