#ifndef GINV_ORACLE_HPP
#define GINV_ORACLE_HPP

#include <cstdint>
#include <string>

#include "ginv/chain.hpp"
#include "ginv/matrix.hpp"

namespace ginv::oracle {

// Monte Carlo configuration. Identical configs give bit-identical results:
// each trial draws from its own substream derived from (seed, trial index),
// so any parallel partition of the trials would reproduce the same numbers.
struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t max_steps = 1000000;
  std::uint64_t seed = 0;
};

struct EstimateWithError {
  double mean = 0.0;
  double second_moment = 0.0;
  double stderr_mean = 0.0;
  double stderr_second_moment = 0.0;
  std::uint64_t trials_used = 0;
  std::uint64_t censored = 0;
  // Identity of the generator, recorded alongside results.
  std::string rng = "mt19937_64/splitmix64-substreams";
};

// Simulates first passage (first return when from == to) step counts by
// direct walks on the chain. Trials that exceed max_steps are rejected and
// counted; more than 1% rejected raises TooManyCensored.
EstimateWithError simulate_first_passage(const StochasticChain& chain,
                                         std::size_t from, std::size_t to,
                                         const SimConfig& cfg);

// Left-multiplication power iteration for the stationary vector. The caller
// must hand in an aperiodic matrix (damp periodic chains with (P + I)/2
// first; damping leaves the stationary vector unchanged).
Vector power_iteration_pi(const Matrix& p, double tol,
                          std::size_t max_iters);

// Exact quantities for the two-state chain with off-diagonal transition
// probabilities a (state 1 -> 2) and b (state 2 -> 1), derived from
// geometric first-passage distributions and the 2x2 adjugate inverse.
struct TwoStateSolution {
  Vector pi;
  Matrix mean_passage;               // M
  Vector recurrence_second_moment;   // diagonal of M^(2)
  double kemeny = 0.0;
  Matrix fundamental;                // Z
  Matrix group;                      // A#
};

TwoStateSolution two_state_closed_form(double a, double b);

}  // namespace ginv::oracle

#endif  // GINV_ORACLE_HPP
