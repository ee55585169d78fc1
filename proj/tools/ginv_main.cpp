// Command-line front end: file-driven access to stationary vectors, mean
// first passage times, g-inverse construction/classification, Kemeny's
// constant, recurrence second moments, and perturbation analysis.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ginv/chain.hpp"
#include "ginv/chain_io.hpp"
#include "ginv/errors.hpp"
#include "ginv/ginverse.hpp"
#include "ginv/matrix.hpp"
#include "ginv/moments.hpp"
#include "ginv/passage.hpp"
#include "ginv/perturb.hpp"

using nlohmann::json;

namespace {

struct GlobalOptions {
  bool as_json = false;
  bool full_precision = false;
  ginv::Tolerance tol;
  std::vector<std::string> argv;
};

std::string format_number(double x, const GlobalOptions& opts) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), opts.full_precision ? "%.17g" : "%.12g", x);
  return buf;
}

json to_json(const ginv::Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json to_json(const ginv::Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

void print_vector(const std::string& name, const ginv::Vector& v,
                  const GlobalOptions& opts) {
  std::cout << name << ":";
  for (double x : v) std::cout << " " << format_number(x, opts);
  std::cout << "\n";
}

void print_matrix(const std::string& name, const ginv::Matrix& m,
                  const GlobalOptions& opts) {
  std::cout << name << ":\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::cout << " ";
    for (std::size_t j = 0; j < m.cols(); ++j)
      std::cout << " " << format_number(m(i, j), opts);
    std::cout << "\n";
  }
}

char hex_digit(std::uint64_t nibble) {
  return "0123456789abcdef"[nibble & 0xf];
}

std::string digest_string(std::uint64_t digest) {
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4)
    out.push_back(hex_digit(digest >> shift));
  return out;
}

json envelope_for(const std::string& command, const ginv::ChainFile& file,
                  const GlobalOptions& opts) {
  json envelope;
  envelope["command"] = command;
  envelope["argv"] = opts.argv;
  envelope["input"] = {
      {"P", to_json(file.matrix)},
      {"path", file.path},
      {"digest", digest_string(file.digest)},
      {"labels", file.labels},
  };
  envelope["tolerances"] = {{"abs", opts.tol.abs}, {"rel", opts.tol.rel}};
  return envelope;
}

void emit(const json& envelope, const GlobalOptions& opts) {
  if (opts.as_json) std::cout << envelope.dump(2) << "\n";
}

// --ginv grammar: z | group | mp | param:<alpha-file>,<beta-file>,<gamma>
ginv::GInverse build_from_spec(const ginv::StochasticChain& chain,
                               const std::string& spec) {
  if (spec == "z") return ginv::fundamental_matrix(chain);
  if (spec == "group") return ginv::group_inverse(chain);
  if (spec == "mp") return ginv::moore_penrose(chain);
  if (spec.rfind("param:", 0) == 0) {
    const std::string rest = spec.substr(6);
    const auto first = rest.find(',');
    const auto second = rest.find(',', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      throw ginv::ParseError(
          "expected param:<alpha-file>,<beta-file>,<gamma>");
    }
    ginv::GInverseParams params;
    params.alpha = ginv::load_vector_file(rest.substr(0, first));
    params.beta =
        ginv::load_vector_file(rest.substr(first + 1, second - first - 1));
    try {
      params.gamma = std::stod(rest.substr(second + 1));
    } catch (const std::exception&) {
      throw ginv::ParseError("gamma in --ginv spec is not a number");
    }
    return ginv::build_parametric(chain, params);
  }
  throw ginv::ParseError("unknown --ginv spec '" + spec +
                         "' (use z, group, mp, or param:...)");
}

int run_stationary(const std::string& path, const GlobalOptions& opts) {
  const ginv::ChainFile file = ginv::load_chain_file(path);
  const ginv::StochasticChain chain = ginv::validate_chain(file.matrix, opts.tol);
  const ginv::Vector& pi = chain.pi();
  const double residual =
      ginv::max_abs_diff(pi * chain.transition(), pi);

  if (opts.as_json) {
    json envelope = envelope_for("stationary", file, opts);
    envelope["results"] = {{"pi", to_json(pi)}, {"residual", residual}};
    emit(envelope, opts);
  } else {
    print_vector("pi", pi, opts);
    std::cout << "residual ||pi^T P - pi^T||_inf: "
              << format_number(residual, opts) << "\n";
  }
  return 0;
}

int run_mfpt(const std::string& path, std::vector<std::string> routes,
             const std::string& ginv_spec, const GlobalOptions& opts) {
  const ginv::ChainFile file = ginv::load_chain_file(path);
  const ginv::StochasticChain chain = ginv::validate_chain(file.matrix, opts.tol);
  if (routes.empty()) routes.push_back("direct");

  std::optional<ginv::GInverse> inverse;
  const auto inverse_ref = [&]() -> const ginv::GInverse& {
    if (!inverse) inverse = build_from_spec(chain, ginv_spec);
    return *inverse;
  };

  std::vector<std::pair<std::string, ginv::Matrix>> results;
  for (const std::string& route : routes) {
    if (route == "direct") {
      results.emplace_back(route, ginv::mfpt_direct(chain).mean);
    } else if (route == "ginv") {
      results.emplace_back(route,
                           ginv::mfpt_from_ginverse(chain, inverse_ref()).mean);
    } else if (route == "deflated") {
      results.emplace_back(route,
                           ginv::mfpt_from_deflated(chain, inverse_ref()).mean);
    } else if (route == "simplified") {
      results.emplace_back(
          route, ginv::mfpt_simplified_15a(chain, inverse_ref()).mean);
    } else {
      throw ginv::UnknownCase("unknown mfpt route '" + route + "'");
    }
  }

  double max_discrepancy = 0.0;
  for (std::size_t i = 1; i < results.size(); ++i)
    max_discrepancy = std::max(
        max_discrepancy,
        ginv::max_abs_diff(results[i].second, results[0].second));

  if (opts.as_json) {
    json envelope = envelope_for("mfpt", file, opts);
    json by_route;
    for (const auto& [route, m] : results) by_route[route] = to_json(m);
    envelope["results"] = {{"M", to_json(results[0].second)},
                           {"routes", by_route}};
    if (results.size() > 1)
      envelope["route_agreement"] = {{"max_discrepancy", max_discrepancy}};
    emit(envelope, opts);
  } else {
    print_matrix("M (" + results[0].first + ")", results[0].second, opts);
    if (results.size() > 1)
      std::cout << "max discrepancy across routes: "
                << format_number(max_discrepancy, opts) << "\n";
  }
  return 0;
}

int run_ginv(const std::string& path, const std::string& build_spec,
             bool classify_flag, bool reconstruct_flag,
             const GlobalOptions& opts) {
  const ginv::ChainFile file = ginv::load_chain_file(path);
  const ginv::StochasticChain chain = ginv::validate_chain(file.matrix, opts.tol);
  const ginv::GInverse inverse = build_from_spec(chain, build_spec);

  json results;
  results["G"] = to_json(inverse.matrix);
  results["alpha"] = to_json(inverse.params.alpha);
  results["beta"] = to_json(inverse.params.beta);
  results["gamma"] = inverse.params.gamma;

  std::vector<std::string> classes;
  if (classify_flag) {
    const ginv::ConditionSet set = ginv::classify(chain, inverse);
    if (set.cond2) classes.push_back("2");
    if (set.cond3) classes.push_back("3");
    if (set.cond4) classes.push_back("4");
    if (set.cond5) classes.push_back("5");
    if (set.cond5a) classes.push_back("5a");
    if (set.cond5b) classes.push_back("5b");
    results["classes"] = classes;
  }

  double reconstruction_error = 0.0;
  if (reconstruct_flag) {
    const ginv::Matrix m = ginv::mfpt_direct(chain).mean;
    const ginv::Matrix rebuilt =
        ginv::reconstruct_ginverse(inverse.params, chain.pi(), m);
    reconstruction_error = ginv::max_abs_diff(rebuilt, inverse.matrix);
    results["reconstruction_error"] = reconstruction_error;
  }

  if (opts.as_json) {
    json envelope = envelope_for("ginv", file, opts);
    envelope["results"] = std::move(results);
    emit(envelope, opts);
  } else {
    print_matrix("G", inverse.matrix, opts);
    print_vector("alpha", inverse.params.alpha, opts);
    print_vector("beta", inverse.params.beta, opts);
    std::cout << "gamma: " << format_number(inverse.params.gamma, opts) << "\n";
    if (classify_flag) {
      std::cout << "classes: {";
      for (std::size_t i = 0; i < classes.size(); ++i)
        std::cout << (i > 0 ? ", " : "") << classes[i];
      std::cout << "}\n";
    }
    if (reconstruct_flag)
      std::cout << "max reconstruction error: "
                << format_number(reconstruction_error, opts) << "\n";
  }
  return 0;
}

int run_kemeny(const std::string& path, std::vector<std::string> routes,
               const std::string& ginv_spec, const GlobalOptions& opts) {
  const ginv::ChainFile file = ginv::load_chain_file(path);
  const ginv::StochasticChain chain = ginv::validate_chain(file.matrix, opts.tol);
  if (routes.empty())
    routes = {"definition", "general_g", "trace_15a", "delta_sum"};

  std::optional<ginv::GInverse> inverse;
  const auto inverse_ptr = [&]() {
    if (!inverse) inverse = build_from_spec(chain, ginv_spec);
    return &*inverse;
  };

  std::vector<std::pair<std::string, double>> values;
  for (const std::string& name : routes) {
    const ginv::KemenyRoute route = ginv::parse_kemeny_route(name);
    const ginv::GInverse* g =
        route == ginv::KemenyRoute::definition ? nullptr : inverse_ptr();
    values.emplace_back(name, ginv::kemeny_constant(chain, route, g).value);
  }

  // Constancy of the pi-weighted row sums across starting states.
  const ginv::Matrix m = ginv::mfpt_direct(chain).mean;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < chain.size(); ++j)
      acc += chain.pi()[j] * m(i, j);
    if (i == 0) lo = hi = acc;
    lo = std::min(lo, acc);
    hi = std::max(hi, acc);
  }
  const double constancy = hi - lo;

  double spread = 0.0;
  for (const auto& [name, value] : values)
    spread = std::max(spread, std::abs(value - values[0].second));

  if (opts.as_json) {
    json envelope = envelope_for("kemeny", file, opts);
    json by_route;
    for (const auto& [name, value] : values) by_route[name] = value;
    envelope["results"] = {{"K", values[0].second},
                           {"routes", by_route},
                           {"row_constancy_residual", constancy}};
    if (values.size() > 1)
      envelope["route_agreement"] = {{"max_discrepancy", spread}};
    emit(envelope, opts);
  } else {
    for (const auto& [name, value] : values)
      std::cout << "K (" << name << "): " << format_number(value, opts)
                << "\n";
    std::cout << "per-row constancy residual: "
              << format_number(constancy, opts) << "\n";
  }
  return 0;
}

int run_moments(const std::string& path, const GlobalOptions& opts) {
  const ginv::ChainFile file = ginv::load_chain_file(path);
  const ginv::StochasticChain chain = ginv::validate_chain(file.matrix, opts.tol);
  const ginv::Matrix m = ginv::mfpt_direct(chain).mean;
  const ginv::SecondMoments moments_result = ginv::second_moments(chain, m);
  const ginv::Vector& md2 = moments_result.recurrence_diag;
  const ginv::Matrix& m2 = *moments_result.full;

  if (opts.as_json) {
    json envelope = envelope_for("moments", file, opts);
    envelope["results"] = {{"recurrence_second_moments", to_json(md2)},
                           {"M2", to_json(m2)},
                           {"M", to_json(m)}};
    emit(envelope, opts);
  } else {
    print_vector("recurrence second moments", md2, opts);
    print_matrix("M2", m2, opts);
  }
  return 0;
}

int run_perturb(const std::string& path, const std::string& delta_path,
                const std::string& ginv_spec, const GlobalOptions& opts) {
  const ginv::ChainFile file = ginv::load_chain_file(path);
  const ginv::StochasticChain chain = ginv::validate_chain(file.matrix, opts.tol);
  const ginv::Matrix shift = ginv::load_matrix_file(delta_path);
  const ginv::GInverse inverse = build_from_spec(chain, ginv_spec);

  const ginv::PerturbationReport report =
      ginv::delta_routes(chain, shift, inverse);

  if (opts.as_json) {
    json envelope = envelope_for("perturb", file, opts);
    json routes;
    for (const auto& [name, delta] : report.route_deltas)
      routes[name] = to_json(delta);
    envelope["results"] = {
        {"pi_bar", to_json(report.pi_bar)},
        {"delta", to_json(report.delta)},
        {"routes", routes},
        {"bound",
         {{"lhs", report.bound.lhs},
          {"bound", report.bound.bound},
          {"satisfied", report.bound.satisfied}}},
    };
    envelope["route_agreement"] = {
        {"max_discrepancy", report.max_route_discrepancy}};
    emit(envelope, opts);
  } else {
    print_vector("pi_bar", report.pi_bar, opts);
    print_vector("delta", report.delta, opts);
    for (const auto& [name, delta] : report.route_deltas)
      print_vector("delta via " + name, delta, opts);
    std::cout << "bound lhs <= (K-1)*||E||_inf: "
              << format_number(report.bound.lhs, opts)
              << " <= " << format_number(report.bound.bound, opts)
              << (report.bound.satisfied ? "  (satisfied)" : "  (VIOLATED)")
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized inverses of Markovian kernels: stationary "
               "vectors, passage times, Kemeny's constant, moments, and "
               "perturbation analysis for finite irreducible chains"};
  app.require_subcommand(1);

  GlobalOptions opts;
  opts.argv.assign(argv, argv + argc);
  if (const char* env = std::getenv("GINV_DEFAULT_TOL")) {
    try {
      const double tol = std::stod(env);
      opts.tol = ginv::Tolerance(tol, tol);
    } catch (const std::exception&) {
      std::cerr << json{{"error",
                         {{"type", "ParseError"},
                          {"message", "GINV_DEFAULT_TOL is not a number"}}}}
                       .dump()
                << "\n";
      return 2;
    }
  }
  app.add_flag("--json", opts.as_json, "emit a JSON envelope on stdout");
  app.add_flag("--full-precision", opts.full_precision,
               "print numbers with 17 significant digits");
  double tol_override = -1.0;
  app.add_option("--tol", tol_override,
                 "absolute/relative tolerance for validation");

  std::string chain_path;
  std::vector<std::string> mfpt_routes;
  std::vector<std::string> kemeny_routes;
  std::string ginv_spec = "z";
  std::string build_spec;
  std::string delta_path;
  bool classify_flag = false;
  bool reconstruct_flag = false;

  CLI::App* stationary =
      app.add_subcommand("stationary", "stationary distribution");
  stationary->add_option("chain", chain_path, "transition matrix file")
      ->required();

  CLI::App* mfpt = app.add_subcommand("mfpt", "mean first passage times");
  mfpt->add_option("chain", chain_path)->required();
  mfpt->add_option("--route", mfpt_routes,
                   "direct | ginv | deflated | simplified (repeatable)");
  mfpt->add_option("--ginv", ginv_spec,
                   "z | group | mp | param:<alpha>,<beta>,<gamma>");

  CLI::App* ginv_cmd =
      app.add_subcommand("ginv", "build and inspect a g-inverse");
  ginv_cmd->add_option("chain", chain_path)->required();
  ginv_cmd->add_option("--build", build_spec)->required();
  ginv_cmd->add_flag("--classify", classify_flag);
  ginv_cmd->add_flag("--reconstruct", reconstruct_flag);

  CLI::App* kemeny = app.add_subcommand("kemeny", "Kemeny's constant");
  kemeny->add_option("chain", chain_path)->required();
  kemeny->add_option("--route", kemeny_routes,
                     "definition | general_g | trace_15a | delta_sum");
  kemeny->add_option("--ginv", ginv_spec);

  CLI::App* moments =
      app.add_subcommand("moments", "second moments of recurrence times");
  moments->add_option("chain", chain_path)->required();

  CLI::App* perturb =
      app.add_subcommand("perturb", "stationary shift under a perturbation");
  perturb->add_option("chain", chain_path)->required();
  perturb->add_option("--delta", delta_path, "perturbation matrix file")
      ->required();
  perturb->add_option("--ginv", ginv_spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) {
      std::cerr << json{{"error",
                         {{"type", "UsageError"}, {"message", e.what()}}}}
                       .dump()
                << "\n";
    }
    return app.exit(e);
  }

  try {
    if (tol_override > 0.0) opts.tol = ginv::Tolerance(tol_override, tol_override);
    if (stationary->parsed()) return run_stationary(chain_path, opts);
    if (mfpt->parsed())
      return run_mfpt(chain_path, mfpt_routes, ginv_spec, opts);
    if (ginv_cmd->parsed())
      return run_ginv(chain_path, build_spec, classify_flag, reconstruct_flag,
                      opts);
    if (kemeny->parsed())
      return run_kemeny(chain_path, kemeny_routes, ginv_spec, opts);
    if (moments->parsed()) return run_moments(chain_path, opts);
    if (perturb->parsed())
      return run_perturb(chain_path, delta_path, ginv_spec, opts);
  } catch (const ginv::Error& e) {
    std::cerr << json{{"error",
                       {{"type", e.name()}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error",
                       {{"type", "InternalError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 3;
  }
  return 2;
}
