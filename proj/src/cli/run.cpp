#include "collapse_gauge/run.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"

#include "collapse_gauge/io.hpp"
#include "collapse_gauge/lambda.hpp"
#include "collapse_gauge/montecarlo.hpp"
#include "collapse_gauge/verify.hpp"

namespace collapse_gauge {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::reliability: return "reliability";
    case Command::helstrom: return "helstrom";
    case Command::lambda: return "lambda";
    case Command::bounds: return "bounds";
    case Command::mc: return "mc";
    case Command::search: return "search";
    case Command::sweep: return "sweep";
    case Command::verify: return "verify";
  }
  return "unknown";
}

void validate(const RunConfig& config) {
  if (!(config.p >= 0.0 && config.p <= 1.0)) throw ValidationError("--p must lie in [0, 1]");
  if (config.d < 2) throw ValidationError("--d must be at least 2");
  if (config.n < 1) throw ValidationError("--n must be at least 1");
  if (config.budget < 1) throw ValidationError("--budget must be at least 1");
  if (config.rho1.has_value() != config.rho2.has_value()) {
    throw ValidationError("--rho1 and --rho2 must be given together");
  }
}

namespace {

Effect require_effect(const RunConfig& config) {
  if (!config.effect.empty()) return load_effect(config.effect, config.d);
  if (config.input_path) return load_effect(config.input_path->string(), config.d);
  throw ValidationError(std::string(to_string(config.command)) +
                        ": an effect is required (--effect NAME|FILE or --input FILE)");
}

std::optional<Effect> optional_effect(const RunConfig& config) {
  if (config.effect.empty() && !config.input_path) return std::nullopt;
  return require_effect(config);
}

PureState require_state(const RunConfig& config, int d) {
  PureState psi = load_state(config.state.empty() ? "uniform" : config.state, d);
  if (psi.dim() != d) throw DimensionMismatch("state and effect dimensions differ");
  return psi;
}

json cmd_reliability(const RunConfig& config) {
  const Effect e = require_effect(config);
  const int d = e.dim();
  const PureState psi = require_state(config, d);
  const CollapseParams params(config.p, d);
  const double r = reliability_pure(psi, params, e);
  const double blind = blind_guess_reliability(config.p);
  return json{{"p", config.p},
              {"d", d},
              {"reliability", r},
              {"blind_guess", blind},
              {"advantage", r - blind},
              {"indicator_expectation", psi.expectation(collapse_indicator_operator(e, params))}};
}

json cmd_helstrom(const RunConfig& config) {
  json out{{"p", config.p}};
  if (config.rho1) {
    const DensityMatrix r1 = load_density(*config.rho1);
    const DensityMatrix r2 = load_density(*config.rho2);
    const HelstromResult h = helstrom_optimal(r1, r2, config.p);
    out["d"] = r1.dim();
    out["instance"] = "general";
    out["r_max"] = h.r_max;
    out["lambda_plus"] = h.lambda_plus;
    out["lambda_minus"] = h.lambda_minus;
    out["effect"] = to_json(h.effect);
    return out;
  }
  const PureState psi = require_state(config, config.d);
  const auto [collapsed, pure] = collapse_hypotheses(psi);
  const HelstromResult h = helstrom_optimal(collapsed, pure, config.p);
  out["d"] = psi.dim();
  out["instance"] = "collapse";
  out["r_max"] = h.r_max;
  out["lambda_plus"] = h.lambda_plus;
  out["lambda_minus"] = h.lambda_minus;
  out["blind_guess"] = blind_guess_reliability(config.p);
  out["upper_bound"] = helstrom_upper_bound(CollapseParams(config.p, psi.dim()));
  out["effect"] = to_json(h.effect);
  return out;
}

json cmd_lambda(const RunConfig& config) {
  const Effect e = require_effect(config);
  const CollapseParams params(config.p, e.dim());
  const LambdaResult r = lambda_p(e, params);
  const SignedSpectrum spec = SignedSpectrum::of(collapse_indicator_operator(e, params));
  json out = to_json(r);
  out["p"] = config.p;
  out["d"] = e.dim();
  out["k"] = spec.k();
  out["m"] = spec.m();
  out["bound_markov"] = markov_bound(e, params);
  out["bound_chernoff"] = chernoff_bound(config.p);
  out["conjecture_bound"] = conjecture_bound(e.dim());
  return out;
}

json cmd_bounds(const RunConfig& config) {
  const std::optional<Effect> e = optional_effect(config);
  const int d = e ? e->dim() : config.d;
  json out{{"p", config.p},
           {"d", d},
           {"chernoff", chernoff_bound(config.p)},
           {"conjecture_bound", conjecture_bound(d)},
           {"helstrom_upper_bound", helstrom_upper_bound(CollapseParams(config.p, d))},
           {"good_p_threshold_limit", good_p_threshold_limit()},
           {"single_negative_regime", single_negative_regime(config.p)}};
  out["good_p_threshold"] = d >= 3 ? json(good_p_threshold(d)) : json(nullptr);
  if (e) out["markov"] = markov_bound(*e, CollapseParams(config.p, d));
  return out;
}

json cmd_mc(const RunConfig& config) {
  const Effect e = require_effect(config);
  const int d = e.dim();
  const CollapseParams params(config.p, d);
  json out{{"p", config.p}, {"d", d}};
  EstimateWithCI est;
  double exact = 0.0;
  if (config.state.empty()) {
    out["quantity"] = "lambda";
    est = estimate_lambda(e, params, config.n, config.seed);
    exact = lambda_p(e, params).value;
  } else {
    out["quantity"] = "reliability";
    const PureState psi = require_state(config, d);
    est = estimate_reliability(psi, params, e, config.n, config.seed);
    exact = reliability_pure(psi, params, e);
  }
  out.update(to_json(est));
  out["exact"] = exact;
  out["z_score"] = est.std_error > 0.0 ? (est.mean - exact) / est.std_error : 0.0;
  return out;
}

json cmd_search(const RunConfig& config) {
  const SearchReport report =
      maximize_lambda(config.d, config.p, config.budget, config.strategy, config.seed);
  json out = to_json(report);
  out["seed"] = config.seed;
  return out;
}

std::vector<SweepPoint> sweep_points(const RunConfig& config, const Effect& e) {
  const std::vector<double> grid =
      config.p_grid.empty() ? uniform_p_grid(config.p_step) : config.p_grid;
  return p_sweep(e, grid);
}

std::string scalar_csv(const json& v) {
  if (v.is_number_float()) return format_csv_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Header and one row from the scalar members of a JSON object.
std::string object_csv(const json& obj) {
  std::string header;
  std::string row;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_structured()) continue;
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    row += scalar_csv(value);
  }
  return header + '\n' + row + '\n';
}

std::string render(const RunConfig& config, OutputFormat format) {
  if (config.command == Command::sweep) {
    const Effect e = require_effect(config);
    const auto points = sweep_points(config, e);
    if (format == OutputFormat::csv) {
      std::string text = "p,lambda,method,bound_markov,bound_chernoff\n";
      for (const auto& pt : points) {
        const CollapseParams params(pt.p, e.dim());
        text += format_csv_double(pt.p) + ',' + format_csv_double(pt.lambda.value) + ',' +
                std::string(to_string(pt.lambda.method)) + ',' +
                format_csv_double(markov_bound(e, params)) + ',' +
                format_csv_double(chernoff_bound(pt.p)) + '\n';
      }
      return text;
    }
    json rows = json::array();
    for (const auto& pt : points) {
      const CollapseParams params(pt.p, e.dim());
      rows.push_back({{"p", pt.p},
                      {"lambda", pt.lambda.value},
                      {"method", to_string(pt.lambda.method)},
                      {"bound_markov", markov_bound(e, params)},
                      {"bound_chernoff", chernoff_bound(pt.p)}});
    }
    return rows.dump(2) + '\n';
  }

  json result;
  switch (config.command) {
    case Command::reliability: result = cmd_reliability(config); break;
    case Command::helstrom: result = cmd_helstrom(config); break;
    case Command::lambda: result = cmd_lambda(config); break;
    case Command::bounds: result = cmd_bounds(config); break;
    case Command::mc: result = cmd_mc(config); break;
    case Command::search: result = cmd_search(config); break;
    case Command::sweep:
    case Command::verify: break;
  }
  result["command"] = to_string(config.command);
  return format == OutputFormat::csv ? object_csv(result) : result.dump(2) + '\n';
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out_path) {
    write_text_file(*config.out_path, text);
  } else {
    out << text;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.command == Command::verify) {
      const auto results = run_verification(config.seed);
      std::ostringstream table;
      print_verification_table(results, table);
      emit(config, table.str(), out);
      for (const auto& r : results) {
        if (!r.passed) return kExitFailure;
      }
      return kExitOk;
    }
    const OutputFormat format = config.output_format.value_or(
        config.command == Command::sweep ? OutputFormat::csv : OutputFormat::json);
    emit(config, render(config, format), out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

namespace {

// Applies COLLAPSE_GAUGE_THREADS; returns false on an unusable value.
bool apply_thread_cap(std::ostream& err) {
  const char* raw = std::getenv("COLLAPSE_GAUGE_THREADS");
  if (raw == nullptr || *raw == '\0') return true;
  const std::string_view s(raw);
  int threads = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), threads);
  if (ec != std::errc() || ptr != s.data() + s.size() || threads < 1) {
    err << "error: COLLAPSE_GAUGE_THREADS must be a positive integer\n";
    return false;
  }
  omp_set_num_threads(threads);
  return true;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  if (!apply_thread_cap(err)) return kExitValidation;

  CLI::App app{"Reliability of collapse-detection experiments on a d-level system"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format;
  std::string strategy;
  std::string input;
  std::string out_path;
  std::string rho1;
  std::string rho2;

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::reliability, "Reliability of an effect for a known state"},
      {Command::helstrom, "Optimal discrimination (collapse instance or --rho1/--rho2)"},
      {Command::lambda, "Exact fraction of states on which an effect beats blind guessing"},
      {Command::bounds, "Closed-form bounds at the given p and d"},
      {Command::mc, "Monte Carlo estimate of lambda (or of reliability with --state)"},
      {Command::search, "Search for effects maximizing lambda"},
      {Command::sweep, "Lambda over a grid of p values"},
      {Command::verify, "Run the property suite and print a pass/fail table"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(cmd)), help);
    sub->callback([&config, c = cmd] { config.command = c; });
    sub->add_option("--p", config.p, "Collapse probability");
    sub->add_option("--d", config.d, "Hilbert space dimension (named effects and states)");
    sub->add_option("--n", config.n, "Monte Carlo sample count");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "Write results to this file instead of stdout");
    sub->add_option("--input", input, "Operator file (used when --effect is absent)");
    sub->add_option("--effect", config.effect,
                    "zero | identity | uniform-projector | rank-k:K | operator file");
    sub->add_option("--state", config.state, "uniform | basis:K | random:SEED | state file");
    sub->add_option("--rho1", rho1, "Density file of hypothesis 1 (prior p)");
    sub->add_option("--rho2", rho2, "Density file of hypothesis 2 (prior 1-p)");
    sub->add_option("--budget", config.budget, "Search budget (candidate evaluations)");
    sub->add_option("--strategy", strategy,
                    "uniform_projector | rank_k_projectors | spectrum_parametrized | "
                    "random_restart_local");
    sub->add_option("--p-grid", config.p_grid, "Comma-separated ascending p values")
        ->delimiter(',');
    sub->add_option("--p-step", config.p_step, "Grid step when --p-grid is absent");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (!format.empty()) config.output_format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (!strategy.empty()) config.strategy = parse_strategy(strategy);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (!input.empty()) config.input_path = input;
  if (!out_path.empty()) config.out_path = out_path;
  if (!rho1.empty()) config.rho1 = rho1;
  if (!rho2.empty()) config.rho2 = rho2;
  return run(config, out, err);
}

}  // namespace collapse_gauge
