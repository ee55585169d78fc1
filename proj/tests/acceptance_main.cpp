// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here; nothing defers to later calibration.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ginv/chain.hpp"
#include "ginv/errors.hpp"
#include "ginv/ginverse.hpp"
#include "ginv/matrix.hpp"
#include "ginv/moments.hpp"
#include "ginv/oracle.hpp"
#include "ginv/passage.hpp"
#include "ginv/perturb.hpp"
#include "test_support.hpp"

using namespace ginv;

namespace {

struct Tracker {
  bool ok = true;
  double worst = 0.0;
  std::string note;

  void within(double err, double tol, const std::string& context) {
    worst = std::max(worst, err);
    if (!(err <= tol) && ok) {
      ok = false;
      note = context + " err=" + std::to_string(err) +
             " tol=" + std::to_string(tol);
    }
  }
  void require(bool condition, const std::string& context) {
    if (!condition && ok) {
      ok = false;
      note = context;
    }
  }
};

// Shared instance stream: the parameter round-trip and the element-wise
// reconstruction run over the same 200 draws.
struct Instance {
  StochasticChain chain;
  GInverseParams params;
};

std::vector<Instance> make_instances(std::size_t count, std::uint64_t seed) {
  testing::Rng rng(seed);
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    StochasticChain chain = testing::random_chain(rng, 2 + i % 7);
    GInverseParams params = testing::random_params(rng, chain);
    out.push_back(Instance{std::move(chain), std::move(params)});
  }
  return out;
}

Tracker criterion_two_state_grid() {
  Tracker t;
  for (int ia = 1; ia <= 10; ++ia) {
    for (int ib = 1; ib <= 10; ++ib) {
      const double a = ia / 10.0;
      const double b = ib / 10.0;
      const auto closed = oracle::two_state_closed_form(a, b);
      const StochasticChain chain =
          validate_chain(Matrix{{1.0 - a, a}, {b, 1.0 - b}});
      const std::string at = "a=" + std::to_string(a) + " b=" + std::to_string(b);

      t.within(max_abs_diff(chain.pi(), closed.pi), 1e-10, "pi " + at);
      const Matrix m = mfpt_direct(chain).mean;
      t.within(max_abs_diff(m, closed.mean_passage), 1e-10, "M " + at);
      t.within(std::abs(kemeny_constant(chain, KemenyRoute::definition).value -
                        closed.kemeny),
               1e-10, "K " + at);
      const Vector tau = chain.pi() * m;
      t.within(max_abs_diff(second_moment_diag_from_tau(chain.pi(), tau),
                            closed.recurrence_second_moment),
               1e-10, "second moments " + at);
    }
  }
  return t;
}

Tracker criterion_c1_fixture() {
  Tracker t;
  const StochasticChain c1 = testing::c1_chain();
  const Vector pi_exact = testing::c1_pi();
  const Matrix m_exact = testing::c1_mfpt();

  t.within(max_abs_diff(stationary_distribution(c1.transition()), pi_exact),
           1e-10, "pi via solve");
  t.within(max_abs_diff(
               oracle::power_iteration_pi(c1.transition(), 1e-13, 100000),
               pi_exact),
           1e-10, "pi via power iteration");

  const GInverse z = fundamental_matrix(c1);
  t.within(max_abs_diff(mfpt_direct(c1).mean, m_exact), 1e-10, "M direct");
  t.within(max_abs_diff(mfpt_from_ginverse(c1, z).mean, m_exact), 1e-10,
           "M via g-inverse");

  t.within(std::abs(kemeny_constant(c1, KemenyRoute::definition).value -
                    testing::c1_kemeny()),
           1e-10, "K definition");
  t.within(std::abs(kemeny_constant(c1, KemenyRoute::trace_15a, &z).value -
                    testing::c1_kemeny()),
           1e-10, "K trace");

  const Matrix z_exact = testing::c1_fundamental();
  t.within(max_abs_diff(z.matrix, z_exact), 1e-10, "Z solve");
  t.within(max_abs_diff(
               reconstruct_special(SpecialCase::fundamental, c1, m_exact, {}),
               z_exact),
           1e-10, "Z reconstructed");

  const Matrix sharp_exact = testing::c1_group();
  t.within(max_abs_diff(group_inverse(c1).matrix, sharp_exact), 1e-10,
           "group solve");
  t.within(
      max_abs_diff(reconstruct_special(SpecialCase::group, c1, m_exact, {}),
                   sharp_exact),
      1e-10, "group reconstructed");

  const Vector md2_exact = testing::c1_recurrence_second();
  t.within(max_abs_diff(second_moment_diag_from_tau(c1.pi(), testing::c1_tau()),
                        md2_exact),
           1e-10, "second moments via tau");
  t.within(max_abs_diff(second_moment_diag_from_ginverse(c1, z), md2_exact),
           1e-10, "second moments via g-inverse");
  return t;
}

Tracker criterion_parameter_round_trip(const std::vector<Instance>& instances) {
  Tracker t;
  for (const Instance& inst : instances) {
    const std::size_t m = inst.chain.size();
    try {
      const GInverse g = build_parametric(inst.chain, inst.params);
      t.within(max_abs_diff(g.params.alpha, inst.params.alpha), 1e-8, "alpha");
      t.within(max_abs_diff(g.params.beta, inst.params.beta), 1e-8, "beta");
      t.within(std::abs(g.params.gamma - inst.params.gamma), 1e-8, "gamma");

      const double expected = 1.0 + inst.params.gamma;
      t.within(max_abs_diff(g.matrix * inst.params.alpha,
                            expected * ones_vector(m)),
               1e-9 * std::max(1.0, max_abs(g.matrix)), "G alpha residual");
      t.within(max_abs_diff(inst.params.beta * g.matrix,
                            expected * inst.chain.pi()),
               1e-9 * std::max(1.0, max_abs(g.matrix)),
               "beta^T G residual");
    } catch (const Error& e) {
      t.require(false, std::string("construction threw: ") + e.what());
    }
  }
  return t;
}

Tracker criterion_reconstruction(const std::vector<Instance>& instances) {
  Tracker t;
  for (const Instance& inst : instances) {
    const StochasticChain& chain = inst.chain;
    const std::size_t n = chain.size();
    const Vector& pi = chain.pi();
    const Matrix m = mfpt_direct(chain).mean;

    const Matrix direct = build_parametric(chain, inst.params).matrix;
    const double tol = 1e-8 * std::max(1.0, max_abs(direct));
    t.within(max_abs_diff(reconstruct_ginverse(inst.params, pi, m), direct),
             tol, "general reconstruction");

    const Vector uniform(n, 1.0 / static_cast<double>(n));
    const Vector alpha_mp = (1.0 / dot(pi, pi)) * pi;
    const struct {
      SpecialCase id;
      GInverseParams full;
      SpecialCaseParams extra;
    } cases[] = {
        {SpecialCase::class_15a,
         {ones_vector(n), inst.params.beta, inst.params.gamma},
         {inst.params.beta, inst.params.gamma}},
        {SpecialCase::class_125a,
         {ones_vector(n), inst.params.beta, -1.0},
         {inst.params.beta, std::nullopt}},
        {SpecialCase::class_145a,
         {ones_vector(n), uniform, inst.params.gamma},
         {std::nullopt, inst.params.gamma}},
        {SpecialCase::class_1245a,
         {ones_vector(n), uniform, -1.0},
         {std::nullopt, std::nullopt}},
        {SpecialCase::class_15,
         {ones_vector(n), pi, inst.params.gamma},
         {std::nullopt, inst.params.gamma}},
        {SpecialCase::fundamental,
         {ones_vector(n), pi, 0.0},
         {std::nullopt, std::nullopt}},
        {SpecialCase::group,
         {ones_vector(n), pi, -1.0},
         {std::nullopt, std::nullopt}},
        {SpecialCase::class_13,
         {alpha_mp, inst.params.beta, inst.params.gamma},
         {inst.params.beta, inst.params.gamma}},
        {SpecialCase::moore_penrose,
         {alpha_mp, uniform, -1.0},
         {std::nullopt, std::nullopt}},
    };
    for (const auto& c : cases) {
      const Matrix special = reconstruct_special(c.id, chain, m, c.extra);
      const Matrix full = build_parametric(chain, c.full).matrix;
      const double case_tol = 1e-8 * std::max(1.0, max_abs(full));
      t.within(max_abs_diff(special, full), case_tol,
               "case " + special_case_name(c.id));
      t.within(max_abs_diff(reconstruct_ginverse(c.full, pi, m), full),
               case_tol, "full params for case " + special_case_name(c.id));
    }
  }
  return t;
}

Tracker criterion_passage_routes(const std::vector<Instance>& instances) {
  Tracker t;
  for (const Instance& inst : instances) {
    const StochasticChain& chain = inst.chain;
    const Matrix reference = mfpt_direct(chain).mean;
    const GInverse g = build_parametric(chain, inst.params);

    t.within(max_abs_diff(mfpt_from_ginverse(chain, g).mean, reference), 1e-8,
             "matrix route");
    t.within(max_abs_diff(mfpt_from_deflated(chain, g).mean, reference), 1e-8,
             "deflated route");

    // The shortcut must agree exactly when the inverse has constant row
    // sums, and must fail otherwise.
    const std::size_t n = chain.size();
    Matrix shortcut(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        shortcut(i, j) =
            (g.matrix(j, j) - g.matrix(i, j) + (i == j ? 1.0 : 0.0)) /
            chain.pi()[j];
    const bool agrees = max_abs_diff(shortcut, reference) <= 1e-8;
    const bool is_5a = classify(chain, g).cond5a;
    t.require(agrees == is_5a, "shortcut iff constant row sums");

    GInverseParams flat = inst.params;
    flat.alpha = ones_vector(n);
    const GInverse g5a = build_parametric(chain, flat);
    t.within(max_abs_diff(mfpt_simplified_15a(chain, g5a).mean, reference),
             1e-8, "shortcut on 5a inverse");
  }
  return t;
}

Tracker criterion_moment_identities(const std::vector<Instance>& instances) {
  Tracker t;
  for (const Instance& inst : instances) {
    const StochasticChain& chain = inst.chain;
    const std::size_t n = chain.size();
    const Matrix m = mfpt_direct(chain).mean;
    const Vector tau = chain.pi() * m;

    // Variants exercising each specialization plus the general formula.
    const GInverse g = build_parametric(chain, inst.params);
    GInverseParams flat = inst.params;
    flat.alpha = ones_vector(n);
    GInverseParams left = inst.params;
    left.beta = chain.pi();
    GInverseParams both = inst.params;
    both.alpha = ones_vector(n);
    both.beta = chain.pi();
    const GInverse variants[] = {
        g, build_parametric(chain, flat), build_parametric(chain, left),
        build_parametric(chain, both), fundamental_matrix(chain)};

    const Vector md2_ref = second_moment_diag_from_tau(chain.pi(), tau);
    for (const GInverse& variant : variants) {
      try {
        const Vector md2 = second_moment_diag_from_ginverse(chain, variant);
        t.within(max_abs_diff(md2, md2_ref),
                 1e-8 * std::max(1.0, inf_norm(md2_ref)), "moment routes");
      } catch (const Error& e) {
        t.require(false, std::string("moment route threw: ") + e.what());
      }
    }

    for (std::size_t j = 0; j < n; ++j) {
      const double mjj = 1.0 / chain.pi()[j];
      t.within(std::abs(md2_ref[j] + mjj - 2.0 * mjj * tau[j]),
               1e-8 * std::max(1.0, md2_ref[j]), "linking identity");
    }

    const Matrix z = fundamental_matrix(chain).matrix;
    const Matrix sharp = group_inverse(chain).matrix;
    const double scale = 1e-8 * std::max(1.0, max_abs(z));
    t.within(max_abs_diff(ginverse_from_second_moments(chain, 0.0, m, md2_ref), z),
             scale, "second moments rebuild Z");
    t.within(max_abs_diff(ginverse_from_second_moments(chain, -1.0, m, md2_ref),
                          sharp),
             scale, "second moments rebuild group inverse");
  }
  return t;
}

Tracker criterion_kemeny(const std::vector<Instance>& instances) {
  Tracker t;
  for (const Instance& inst : instances) {
    const StochasticChain& chain = inst.chain;
    const Matrix m = mfpt_direct(chain).mean;

    Vector per_start(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < chain.size(); ++j)
        acc += chain.pi()[j] * m(i, j);
      per_start[i] = acc;
    }
    double lo = per_start[0], hi = per_start[0];
    for (double k : per_start) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    t.within(hi - lo, 1e-9 * std::max(1.0, hi), "row constancy");

    const GInverse g = build_parametric(chain, inst.params);
    const GInverse h = deflate(chain, g);
    const double reference =
        kemeny_constant(chain, KemenyRoute::definition).value;
    const double tol = 1e-8 * reference;
    t.within(std::abs(kemeny_constant(chain, KemenyRoute::general_g, &g).value -
                      reference),
             tol, "general route");
    t.within(std::abs(kemeny_constant(chain, KemenyRoute::trace_15a, &h).value -
                      reference),
             tol, "trace route");
    t.within(std::abs(kemeny_constant(chain, KemenyRoute::delta_sum, &g).value -
                      reference),
             tol, "delta route");

    const double z_trace = fundamental_matrix(chain).matrix.trace();
    const double sharp_trace = group_inverse(chain).matrix.trace();
    t.within(std::abs(z_trace - reference), tol, "tr(Z) = K");
    t.within(std::abs(sharp_trace + 1.0 - reference), tol, "tr(A#) + 1 = K");
  }
  return t;
}

Tracker criterion_perturbation() {
  Tracker t;
  testing::Rng rng(20120917);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t m = 2 + checked % 7;
    const StochasticChain chain = testing::random_chain(rng, m);
    const Matrix shift = testing::random_perturbation(rng, chain, 0.1);
    const GInverse g =
        build_parametric(chain, testing::random_params(rng, chain));
    try {
      const PerturbationReport report = delta_routes(chain, shift, g);
      t.within(report.max_route_discrepancy, 1e-9, "route agreement");
      t.within(max_abs_diff(report.delta * chain.kernel(),
                            report.pi_bar * shift),
               1e-9, "difference equation");
      t.require(report.bound.satisfied, "kemeny bound");
      t.require(report.bound.lhs <= report.bound.bound + 1e-12,
                "kemeny bound slack");
    } catch (const Error& e) {
      t.require(false, std::string("perturbation threw: ") + e.what());
    }
    ++checked;
  }
  return t;
}

Tracker criterion_monte_carlo() {
  Tracker t;
  const StochasticChain c1 = testing::c1_chain();
  const oracle::SimConfig cfg{100000, 1000000, 42};
  const auto closed = oracle::two_state_closed_form(0.5, 0.25);

  const auto m12 = oracle::simulate_first_passage(c1, 0, 1, cfg);
  t.require(std::abs(m12.mean - closed.mean_passage(0, 1)) <=
                4.0 * m12.stderr_mean,
            "m12 outside 4 standard errors");
  const auto m21 = oracle::simulate_first_passage(c1, 1, 0, cfg);
  t.require(std::abs(m21.mean - closed.mean_passage(1, 0)) <=
                4.0 * m21.stderr_mean,
            "m21 outside 4 standard errors");
  const auto ret = oracle::simulate_first_passage(c1, 0, 0, cfg);
  t.require(std::abs(ret.second_moment - closed.recurrence_second_moment[0]) <=
                4.0 * ret.stderr_second_moment,
            "m11 second moment outside 4 standard errors");
  t.worst = std::max(
      {std::abs(m12.mean - 2.0) / m12.stderr_mean,
       std::abs(m21.mean - 4.0) / m21.stderr_mean,
       std::abs(ret.second_moment - 19.0) / ret.stderr_second_moment});
  return t;
}

Tracker criterion_moore_penrose() {
  Tracker t;
  testing::Rng rng(5555);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 7;
    const StochasticChain chain = testing::random_chain(rng, m);
    try {
      // The builder itself enforces the two closed forms agreeing to 1e-9;
      // re-verify the four defining conditions here.
      const GInverse mp = moore_penrose(chain);
      const Matrix k = chain.kernel();
      const Matrix kg = k * mp.matrix;
      const Matrix gk = mp.matrix * k;
      const double tol = 1e-9 * std::max(1.0, max_abs(mp.matrix));
      t.within(max_abs_diff(kg * k, k), tol, "condition 1");
      t.within(max_abs_diff(mp.matrix * kg, mp.matrix), tol, "condition 2");
      t.within(max_abs_diff(kg.transpose(), kg), tol, "condition 3");
      t.within(max_abs_diff(gk.transpose(), gk), tol, "condition 4");
    } catch (const Error& e) {
      t.require(false, std::string("construction threw: ") + e.what());
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const StochasticChain chain =
        testing::random_doubly_stochastic(rng, 2 + trial % 7);
    const Matrix mp = moore_penrose(chain).matrix;
    const Matrix sharp = group_inverse(chain).matrix;
    t.within(max_abs_diff(mp, sharp), 1e-9,
             "doubly stochastic MP equals group inverse");
  }
  return t;
}

}  // namespace

int main() {
  const std::vector<Instance> instances = make_instances(200, 424242);

  struct Criterion {
    int id;
    const char* name;
    std::function<Tracker()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "two-state closed-form agreement (10x10 grid, 1e-10)",
       [] { return criterion_two_state_grid(); }},
      {2, "C1 fixture values by two independent routes (1e-10)",
       [] { return criterion_c1_fixture(); }},
      {3, "parameter round-trip on 200 random instances (1e-8)",
       [&] { return criterion_parameter_round_trip(instances); }},
      {4, "element-wise reconstruction incl. nine special cases (1e-8)",
       [&] { return criterion_reconstruction(instances); }},
      {5, "passage-time route equivalence and shortcut iff (1e-8)",
       [&] { return criterion_passage_routes(instances); }},
      {6, "second-moment identities and rebuilds (1e-8)",
       [&] { return criterion_moment_identities(instances); }},
      {7, "Kemeny constancy and route agreement (1e-9 / 1e-8)",
       [&] { return criterion_kemeny(instances); }},
      {8, "perturbation routes, difference equation, bound (1000 cases, 1e-9)",
       [] { return criterion_perturbation(); }},
      {9, "Monte Carlo consistency on C1 (1e5 trials, 4 standard errors)",
       [] { return criterion_monte_carlo(); }},
      {10, "Moore-Penrose forms and conditions (100 chains, 1e-9)",
       [] { return criterion_moore_penrose(); }},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Tracker t;
    try {
      t = criterion.run();
    } catch (const std::exception& e) {
      t.ok = false;
      t.note = std::string("unexpected exception: ") + e.what();
    }
    if (t.ok) {
      std::printf("PASS %2d  %s (worst %.3g)\n", criterion.id, criterion.name,
                  t.worst);
    } else {
      std::printf("FAIL %2d  %s: %s\n", criterion.id, criterion.name,
                  t.note.c_str());
      ++failures;
    }
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures,
                criteria.size());
  }
  return failures;
}
