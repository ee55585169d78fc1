#include "ginv/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ginv/errors.hpp"

namespace ginv::oracle {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream seed for one trial; mixing keeps neighboring trials decorrelated.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x51a2b3c4d5e6f708ULL));
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

EstimateWithError simulate_first_passage(const StochasticChain& chain,
                                         std::size_t from, std::size_t to,
                                         const SimConfig& cfg) {
  const std::size_t m = chain.size();
  if (from >= m || to >= m) {
    throw ShapeMismatch("state index out of range");
  }
  if (cfg.trials < 1 || cfg.max_steps < 1) {
    throw DegenerateParameters("trials and max_steps must be at least 1");
  }

  // Row-wise cumulative probabilities; the final entry is forced to 1 so a
  // uniform draw always lands in a valid cell.
  const Matrix& p = chain.transition();
  std::vector<std::vector<double>> cumulative(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += p(i, j);
      cumulative[i][j] = acc;
    }
    cumulative[i][m - 1] = 1.0;
  }

  double total = 0.0;
  double total_sq = 0.0;
  double total_quad = 0.0;
  std::uint64_t used = 0;
  std::uint64_t censored = 0;
  for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(substream_seed(cfg.seed, trial));
    std::size_t state = from;
    std::uint64_t steps = 0;
    while (steps < cfg.max_steps) {
      const double u = next_uniform(rng);
      const auto& row = cumulative[state];
      std::size_t next = m - 1;
      for (std::size_t j = 0; j < m; ++j) {
        if (u < row[j]) {
          next = j;
          break;
        }
      }
      state = next;
      ++steps;
      if (state == to) break;
    }
    if (state == to) {
      const double x = static_cast<double>(steps);
      total += x;
      total_sq += x * x;
      total_quad += x * x * x * x;
      ++used;
    } else {
      ++censored;
    }
  }
  if (100 * censored > cfg.trials) {
    throw TooManyCensored(std::to_string(censored) + " of " +
                          std::to_string(cfg.trials) +
                          " trials hit the step cap");
  }
  if (used == 0) {
    throw TooManyCensored("no trial reached the target state");
  }

  EstimateWithError est;
  est.trials_used = used;
  est.censored = censored;
  const double n = static_cast<double>(used);
  est.mean = total / n;
  est.second_moment = total_sq / n;
  if (used > 1) {
    const double var = (total_sq - n * est.mean * est.mean) / (n - 1.0);
    est.stderr_mean = std::sqrt(std::max(var, 0.0) / n);
    const double var_sq =
        (total_quad - n * est.second_moment * est.second_moment) / (n - 1.0);
    est.stderr_second_moment = std::sqrt(std::max(var_sq, 0.0) / n);
  }
  return est;
}

Vector power_iteration_pi(const Matrix& p, double tol,
                          std::size_t max_iters) {
  const std::size_t m = p.rows();
  Vector x(m, 1.0 / static_cast<double>(m));
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    Vector next = x * p;
    normalize_to_one(next);
    if (one_norm(next - x) < tol) {
      return next;
    }
    x = next;
  }
  throw NoConvergence("power iteration did not converge in " +
                      std::to_string(max_iters) + " iterations");
}

TwoStateSolution two_state_closed_form(double a, double b) {
  if (!(a > 0.0 && a <= 1.0) || !(b > 0.0 && b <= 1.0)) {
    throw DegenerateParameters(
        "transition probabilities must lie in (0, 1]");
  }
  TwoStateSolution s;
  const double ab = a + b;
  s.pi = Vector{b / ab, a / ab};
  s.mean_passage = Matrix{{ab / b, 1.0 / a}, {1.0 / b, ab / a}};
  // First return to a state is 1 step with the stay probability, otherwise
  // 1 step plus a geometric number of steps back; the second moment of a
  // geometric(p) count is (2 - p) / p^2.
  s.recurrence_second_moment = Vector{
      1.0 + a * (2.0 / b + (2.0 - b) / (b * b)),
      1.0 + b * (2.0 / a + (2.0 - a) / (a * a)),
  };
  s.kemeny = 1.0 + 1.0 / ab;

  // Z and A# from the 2x2 adjugate, independent of any factorization code.
  const Matrix p{{1.0 - a, a}, {b, 1.0 - b}};
  const Matrix projector = outer(ones_vector(2), s.pi);
  const Matrix k = Matrix::identity(2) - p + projector;
  const double det = k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0);
  s.fundamental = Matrix{{k(1, 1) / det, -k(0, 1) / det},
                         {-k(1, 0) / det, k(0, 0) / det}};
  s.group = s.fundamental - projector;
  return s;
}

}  // namespace ginv::oracle
