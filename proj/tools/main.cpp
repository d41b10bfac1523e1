// Command-line front end: solve models, assess eligibility policies, run the
// game solver, emit plot-ready rule curves, and optionally draw a realized
// action. Human-readable tables by default, one JSON document with --json.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmrkit/errors.hpp"
#include "mmrkit/game.hpp"
#include "mmrkit/mmr.hpp"
#include "mmrkit/model.hpp"
#include "mmrkit/numerics.hpp"
#include "mmrkit/policy.hpp"
#include "mmrkit/rule.hpp"
#include "mmrkit/version.hpp"

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Table-style precision: probabilities to 4 decimals, currency amounts to 1
// decimal; sigma-scale diagnostics keep 6 significant digits. --json always
// carries full precision.
std::string prob(double v) { return fmt("%.4f", v); }
std::string currency(double v) { return fmt("%.1f", v); }
std::string diag(double v) { return fmt("%.6g", v); }

using HumanRows = std::vector<std::pair<std::string, std::string>>;

struct CommandResult {
  json inputs;
  json outputs;
  HumanRows human;
  std::string trailer;  // preformatted extra block (checkpoint table)
};

json rule_to_json(const mmrkit::DecisionRule& rule) {
  if (const auto* t = rule.get_if<mmrkit::Threshold>()) {
    return {{"kind", "threshold"}, {"t", t->t}};
  }
  if (const auto* p = rule.get_if<mmrkit::PiecewiseLinear>()) {
    return {{"kind", "piecewise_linear"}, {"lo", p->lo}, {"hi", p->hi}};
  }
  const auto* m = rule.get_if<mmrkit::MixedThreshold>();
  json thresholds = json::array();
  json weights = json::array();
  for (Eigen::Index i = 0; i < m->thresholds().size(); ++i) {
    thresholds.push_back(m->thresholds()[i]);
    weights.push_back(m->weights()[i]);
  }
  return {{"kind", "mixed_threshold"},
          {"thresholds", std::move(thresholds)},
          {"weights", std::move(weights)}};
}

std::string describe_rule(const mmrkit::DecisionRule& rule) {
  if (const auto* t = rule.get_if<mmrkit::Threshold>()) {
    return "treat iff signal > " + diag(t->t);
  }
  if (const auto* p = rule.get_if<mmrkit::PiecewiseLinear>()) {
    return "ramp from 0 to 1 on [" + diag(p->lo) + ", " + diag(p->hi) + "]";
  }
  const auto* m = rule.get_if<mmrkit::MixedThreshold>();
  return "mixture of " + std::to_string(m->thresholds().size()) +
         " threshold rules";
}

int emit(const std::string& command, const std::vector<std::string>& argv_echo,
         bool as_json, const CommandResult& result) {
  if (as_json) {
    const json record = {{"tool", "mmrkit"},
                         {"version", mmrkit::kVersion},
                         {"timestamp", utc_timestamp()},
                         {"command", command},
                         {"argv", argv_echo},
                         {"inputs", result.inputs},
                         {"outputs", result.outputs}};
    std::cout << record.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : result.human) {
      std::cout << std::left << std::setw(16) << key << value << "\n";
    }
    if (!result.trailer.empty()) {
      std::cout << result.trailer;
    }
  }
  return 0;
}

// Shared across solve/decide: regime, optimal rule, optional kstar.
void describe_model_outputs(const mmrkit::Model& model,
                            const mmrkit::DecisionRule& rule,
                            CommandResult& result) {
  const mmrkit::Regime reg = mmrkit::regime(model);
  result.outputs["regime"] = mmrkit::to_string(reg);
  result.outputs["rule"] = rule_to_json(rule);
  result.human.emplace_back("regime", mmrkit::to_string(reg));
  result.human.emplace_back("rule", describe_rule(rule));
  if (reg == mmrkit::Regime::RandomizedOptimal) {
    const double ks = mmrkit::kstar(model);
    result.outputs["kstar"] = ks;
    result.human.emplace_back("kstar", currency(ks));
  }
}

struct SolveArgs {
  double k = 0.0;
  double sigma = 1.0;
};

CommandResult run_solve(const SolveArgs& args) {
  const mmrkit::Model model(args.k, args.sigma);
  const mmrkit::DecisionRule rule = mmrkit::mmr_rule(model);
  const mmrkit::RegretReport report = mmrkit::nature_best_response(rule, model);

  CommandResult result;
  result.inputs = {{"k", args.k}, {"sigma", args.sigma}};
  describe_model_outputs(model, rule, result);
  result.outputs["worst_regret"] = report.worst_regret;
  result.outputs["worst_state"] = {{"mu", report.argmax_state.mu},
                                   {"mu_star", report.argmax_state.mu_star}};
  result.human.emplace_back("worst_regret", diag(report.worst_regret));
  result.human.emplace_back("worst_state",
                            "mu=" + diag(report.argmax_state.mu) + " mu_star=" +
                                diag(report.argmax_state.mu_star));
  return result;
}

struct DecideArgs {
  double k = 0.0;
  double sigma = 1.0;
  double mu_hat = 0.0;
  std::optional<std::uint64_t> seed;
};

CommandResult run_decide(const DecideArgs& args) {
  const mmrkit::Model model(args.k, args.sigma);
  const mmrkit::DecisionRule rule = mmrkit::mmr_rule(model);
  const double action = mmrkit::evaluate_rule(rule, args.mu_hat);

  CommandResult result;
  result.inputs = {{"k", args.k}, {"sigma", args.sigma}, {"mu_hat", args.mu_hat}};
  describe_model_outputs(model, rule, result);
  result.outputs["action"] = action;
  result.human.emplace_back("action", prob(action));
  if (args.seed) {
    result.inputs["seed"] = *args.seed;
    const int realized = mmrkit::uniform_draw(*args.seed, 0) <= action ? 1 : 0;
    result.outputs["realized_action"] = realized;
    result.human.emplace_back("realized_action", std::to_string(realized));
  }
  return result;
}

struct GameArgs {
  double k = 0.0;
  double sigma = 1.0;
  int grid_n = 401;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  int iterations = 2000;
  std::optional<double> eta;
  int br_grid_n = 1601;
};

mmrkit::GameConfig make_game_config(const GameArgs& args) {
  const mmrkit::Model model(args.k, args.sigma);
  const double half = model.k + 4.0 * model.sigma;
  const double lo = args.grid_lo.value_or(-half);
  const double hi = args.grid_hi.value_or(half);
  if (args.grid_n < 2) {
    throw mmrkit::DomainError("game: --grid-n must be >= 2");
  }
  mmrkit::GameConfig config{
      model, Eigen::VectorXd::LinSpaced(args.grid_n, lo, hi),
      args.eta.value_or(mmrkit::GameConfig::default_learning_rate(
          model, args.grid_n, args.iterations)),
      args.iterations, args.br_grid_n};
  config.validate();
  return config;
}

json game_inputs(const GameArgs& args, const mmrkit::GameConfig& config) {
  return {{"k", args.k},
          {"sigma", args.sigma},
          {"grid_lo", config.threshold_grid[0]},
          {"grid_hi", config.threshold_grid[config.threshold_grid.size() - 1]},
          {"grid_n", args.grid_n},
          {"iterations", args.iterations},
          {"eta", config.learning_rate},
          {"br_grid_n", args.br_grid_n}};
}

CommandResult run_game(const GameArgs& args) {
  const mmrkit::GameConfig config = make_game_config(args);
  const mmrkit::GameSolution solution = mmrkit::solve(config);

  CommandResult result;
  result.inputs = game_inputs(args, config);
  json history = json::array();
  for (const mmrkit::GameCheckpoint& cp : solution.history) {
    history.push_back({{"iteration", cp.iteration},
                       {"lower", cp.lower},
                       {"upper", cp.upper},
                       {"gap", cp.gap},
                       {"increased", cp.increased}});
  }
  result.outputs = {{"lower_bound", solution.lower_bound},
                    {"upper_bound", solution.upper_bound},
                    {"gap", solution.upper_bound - solution.lower_bound},
                    {"iterations_run", solution.iterations_run},
                    {"history", std::move(history)},
                    {"rule", rule_to_json(solution.rule)}};
  result.human.emplace_back("lower_bound", diag(solution.lower_bound));
  result.human.emplace_back("upper_bound", diag(solution.upper_bound));
  result.human.emplace_back("gap",
                            diag(solution.upper_bound - solution.lower_bound));
  result.human.emplace_back("iterations", std::to_string(solution.iterations_run));
  result.human.emplace_back("rule", describe_rule(solution.rule));

  std::ostringstream table;
  table << "\n" << std::left << std::setw(12) << "iteration" << std::setw(14)
        << "lower" << std::setw(14) << "upper" << std::setw(14) << "gap"
        << "flag\n";
  for (const mmrkit::GameCheckpoint& cp : solution.history) {
    table << std::left << std::setw(12) << cp.iteration << std::setw(14)
          << diag(cp.lower) << std::setw(14) << diag(cp.upper) << std::setw(14)
          << diag(cp.gap) << (cp.increased ? "increased" : "") << "\n";
  }
  result.trailer = table.str();
  return result;
}

struct CurveArgs {
  double k = 0.0;
  double sigma = 1.0;
  int grid_n = 401;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::string out_path;
  bool with_game = false;
  int iterations = 2000;
  std::optional<double> eta;
  int br_grid_n = 1601;
};

CommandResult run_curve(const CurveArgs& args) {
  const mmrkit::Model model(args.k, args.sigma);
  const mmrkit::DecisionRule exact = mmrkit::mmr_rule(model);
  if (args.grid_n < 2) {
    throw mmrkit::DomainError("curve: --grid-n must be >= 2");
  }
  const double half = model.k + 4.0 * model.sigma;
  const double lo = args.grid_lo.value_or(-half);
  const double hi = args.grid_hi.value_or(half);
  if (!(lo < hi)) {
    throw mmrkit::DomainError("curve: need --grid-lo < --grid-hi");
  }

  std::optional<mmrkit::GameSolution> solution;
  if (args.with_game) {
    GameArgs game_args;
    game_args.k = args.k;
    game_args.sigma = args.sigma;
    game_args.iterations = args.iterations;
    game_args.eta = args.eta;
    game_args.br_grid_n = args.br_grid_n;
    solution = mmrkit::solve(make_game_config(game_args));
  }

  std::ofstream out(args.out_path);
  if (!out) {
    throw mmrkit::IoError("cannot open '" + args.out_path + "' for writing");
  }
  out << "mu_hat,d_exact" << (solution ? ",d_numeric" : "") << "\n";
  double max_gap = 0.0;
  for (int i = 0; i < args.grid_n; ++i) {
    const double x = lo + (hi - lo) * i / (args.grid_n - 1);
    const double d_exact = exact(x);
    out << fmt("%.17g", x) << "," << fmt("%.17g", d_exact);
    if (solution) {
      const double d_numeric = solution->rule(x);
      max_gap = std::max(max_gap, std::abs(d_exact - d_numeric));
      out << "," << fmt("%.17g", d_numeric);
    }
    out << "\n";
  }
  out.flush();
  if (!out) {
    throw mmrkit::IoError("write to '" + args.out_path + "' failed");
  }

  CommandResult result;
  result.inputs = {{"k", args.k},     {"sigma", args.sigma}, {"grid_lo", lo},
                   {"grid_hi", hi},   {"grid_n", args.grid_n},
                   {"out", args.out_path}, {"game", args.with_game}};
  result.outputs = {{"points_written", args.grid_n}, {"path", args.out_path}};
  result.human.emplace_back("path", args.out_path);
  result.human.emplace_back("points_written", std::to_string(args.grid_n));
  if (solution) {
    result.outputs["max_rule_gap"] = max_gap;
    result.human.emplace_back("max_rule_gap", diag(max_gap));
  }
  return result;
}

struct PolicyArgs {
  std::string data_path;
  std::optional<std::string> config_path;
  std::optional<double> delta;
  std::optional<double> c;
  std::optional<double> b;
  std::optional<double> C;
  std::optional<double> V;
  std::optional<double> mu_hat;
  std::optional<std::string> anchors_path;  // bounds only
  std::optional<std::string> norm;          // bounds only
};

mmrkit::PolicyScalars resolve_scalars(const PolicyArgs& args) {
  mmrkit::PolicyScalars from_file;
  if (args.config_path) {
    from_file = mmrkit::load_config(*args.config_path);
  }
  mmrkit::PolicyScalars from_flags;
  from_flags.delta = args.delta;
  from_flags.c = args.c;
  from_flags.b = args.b;
  from_flags.C = args.C;
  from_flags.V = args.V;
  from_flags.mu_hat_override = args.mu_hat;
  from_flags.anchors_path = args.anchors_path;
  if (args.norm) {
    from_flags.norm = mmrkit::parse_norm(*args.norm);
  }
  return from_file.merged_with(from_flags);
}

void policy_common(const PolicyArgs& args, const mmrkit::PolicyScalars& scalars,
                   const mmrkit::PolicyAssessment& assessment,
                   CommandResult& result) {
  result.inputs = {{"data", args.data_path},
                   {"delta", *scalars.delta},
                   {"c", *scalars.c},
                   {"b", *scalars.b},
                   {"C", *scalars.C},
                   {"V", *scalars.V}};
  if (args.config_path) {
    result.inputs["config"] = *args.config_path;
  }
  if (scalars.mu_hat_override) {
    result.inputs["mu_hat_override"] = *scalars.mu_hat_override;
  }
  result.outputs = {{"mu_hat", assessment.mu_hat},
                    {"k", assessment.k},
                    {"sigma", assessment.sigma},
                    {"regime", mmrkit::to_string(assessment.regime)},
                    {"action", assessment.action}};
  result.human.emplace_back("mu_hat", currency(assessment.mu_hat));
  result.human.emplace_back("k", currency(assessment.k));
  result.human.emplace_back("sigma", currency(assessment.sigma));
  result.human.emplace_back("regime", mmrkit::to_string(assessment.regime));
  if (assessment.kstar) {
    result.outputs["kstar"] = *assessment.kstar;
    result.human.emplace_back("kstar", currency(*assessment.kstar));
  }
  result.human.emplace_back("action", prob(assessment.action));
}

CommandResult run_bdd(const PolicyArgs& args) {
  const mmrkit::PolicyScalars scalars = resolve_scalars(args);
  const mmrkit::PolicyInput input = mmrkit::ingest(args.data_path, scalars);
  const mmrkit::PolicyAssessment assessment =
      mmrkit::assess(input, scalars.mu_hat_override);
  CommandResult result;
  policy_common(args, scalars, assessment, result);
  return result;
}

CommandResult run_bounds(const PolicyArgs& args) {
  const mmrkit::PolicyScalars scalars = resolve_scalars(args);
  if (!scalars.anchors_path) {
    throw mmrkit::MissingParameterError(
        "missing required parameter(s): anchors (give --anchors or an "
        "'anchors' config key)");
  }
  const mmrkit::PolicyInput input = mmrkit::ingest(args.data_path, scalars);
  const std::vector<mmrkit::BoundaryAnchor> anchors =
      mmrkit::load_anchors(*scalars.anchors_path);
  const mmrkit::Norm norm = scalars.norm.value_or(mmrkit::Norm::Euclidean);

  mmrkit::PolicyAssessment assessment =
      mmrkit::assess(input, scalars.mu_hat_override);
  const auto [lo, hi] = mmrkit::tight_bounds(input, anchors, norm);
  assessment.tight_lo = lo;
  assessment.tight_hi = hi;

  CommandResult result;
  policy_common(args, scalars, assessment, result);
  result.inputs["anchors"] = *scalars.anchors_path;
  result.inputs["norm"] = mmrkit::to_string(norm);
  result.outputs["tight_lo"] = lo;
  result.outputs["tight_hi"] = hi;
  result.human.emplace_back("tight_lo", currency(lo));
  result.human.emplace_back("tight_hi", currency(hi));
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimax-regret treatment rules for interval-identified effects"};
  app.set_version_flag("--version", mmrkit::kVersion);
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "emit one JSON document instead of text");

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "optimal rule and worst-case regret");
  solve_cmd->add_option("--k", solve_args.k, "identification half-width (>= 0)")
      ->required();
  solve_cmd->add_option("--sigma", solve_args.sigma, "signal sd (> 0)")
      ->required();

  DecideArgs decide_args;
  CLI::App* decide_cmd =
      app.add_subcommand("decide", "treatment probability at an observed signal");
  decide_cmd->add_option("--k", decide_args.k, "identification half-width (>= 0)")
      ->required();
  decide_cmd->add_option("--sigma", decide_args.sigma, "signal sd (> 0)")
      ->required();
  decide_cmd->add_option("--mu-hat", decide_args.mu_hat, "observed signal")
      ->required();
  decide_cmd->add_option("--seed", decide_args.seed,
                         "draw a realized 0/1 action with this seed");

  GameArgs game_args;
  CLI::App* game_cmd =
      app.add_subcommand("game", "numerical rule via the game solver");
  game_cmd->add_option("--k", game_args.k, "identification half-width (>= 0)")
      ->required();
  game_cmd->add_option("--sigma", game_args.sigma, "signal sd (> 0)")->required();
  game_cmd->add_option("--grid-n", game_args.grid_n, "threshold grid size");
  game_cmd->add_option("--grid-lo", game_args.grid_lo,
                       "left grid end (default -(k+4*sigma))");
  game_cmd->add_option("--grid-hi", game_args.grid_hi,
                       "right grid end (default k+4*sigma)");
  game_cmd->add_option("--iterations", game_args.iterations, "iteration count");
  game_cmd->add_option("--eta", game_args.eta, "learning rate (> 0)");
  game_cmd->add_option("--br-grid-n", game_args.br_grid_n,
                       "nature best-response grid size");

  CurveArgs curve_args;
  CLI::App* curve_cmd =
      app.add_subcommand("curve", "write the rule curve as delimited records");
  curve_cmd->add_option("--k", curve_args.k, "identification half-width (>= 0)")
      ->required();
  curve_cmd->add_option("--sigma", curve_args.sigma, "signal sd (> 0)")
      ->required();
  curve_cmd->add_option("--grid-n", curve_args.grid_n, "points to emit");
  curve_cmd->add_option("--grid-lo", curve_args.grid_lo,
                        "left grid end (default -(k+4*sigma))");
  curve_cmd->add_option("--grid-hi", curve_args.grid_hi,
                        "right grid end (default k+4*sigma)");
  curve_cmd->add_option("--out", curve_args.out_path, "output file")->required();
  curve_cmd->add_flag("--game", curve_args.with_game,
                      "add a d_numeric column from the game solver");
  curve_cmd->add_option("--iterations", curve_args.iterations,
                        "game iteration count");
  curve_cmd->add_option("--eta", curve_args.eta, "game learning rate");
  curve_cmd->add_option("--br-grid-n", curve_args.br_grid_n,
                        "game best-response grid size");

  PolicyArgs bdd_args;
  CLI::App* bdd_cmd = app.add_subcommand(
      "bdd", "assess an eligibility policy from covariate data");
  bdd_cmd->add_option("--data", bdd_args.data_path, "unit data file")->required();
  bdd_cmd->add_option("--config", bdd_args.config_path, "key=value config file");
  bdd_cmd->add_option("--delta", bdd_args.delta, "threshold increase (> 0)");
  bdd_cmd->add_option("--c", bdd_args.c, "average cost per assignment");
  bdd_cmd->add_option("--b", bdd_args.b, "average benefit per assignment (> 0)");
  bdd_cmd->add_option("--C", bdd_args.C, "Lipschitz constant (>= 0)");
  bdd_cmd->add_option("--V", bdd_args.V, "signal variance (> 0)");
  bdd_cmd->add_option("--mu-hat", bdd_args.mu_hat,
                      "use this identified effect instead of the data value");

  PolicyArgs bounds_args;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "assessment plus tight effect bounds from boundary anchors");
  bounds_cmd->add_option("--data", bounds_args.data_path, "unit data file")
      ->required();
  bounds_cmd->add_option("--anchors", bounds_args.anchors_path,
                         "anchors file (x2,tau_hat)");
  bounds_cmd->add_option("--config", bounds_args.config_path,
                         "key=value config file");
  bounds_cmd->add_option("--delta", bounds_args.delta, "threshold increase (> 0)");
  bounds_cmd->add_option("--c", bounds_args.c, "average cost per assignment");
  bounds_cmd->add_option("--b", bounds_args.b,
                         "average benefit per assignment (> 0)");
  bounds_cmd->add_option("--C", bounds_args.C, "Lipschitz constant (>= 0)");
  bounds_cmd->add_option("--V", bounds_args.V, "signal variance (> 0)");
  bounds_cmd->add_option("--mu-hat", bounds_args.mu_hat,
                         "use this identified effect instead of the data value");
  bounds_cmd->add_option("--norm", bounds_args.norm, "euclidean | max | one")
      ->check(CLI::IsMember({"euclidean", "max", "one"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  const std::vector<std::string> argv_echo(argv + 1, argv + argc);
  try {
    if (solve_cmd->parsed()) {
      return emit("solve", argv_echo, as_json, run_solve(solve_args));
    }
    if (decide_cmd->parsed()) {
      return emit("decide", argv_echo, as_json, run_decide(decide_args));
    }
    if (game_cmd->parsed()) {
      return emit("game", argv_echo, as_json, run_game(game_args));
    }
    if (curve_cmd->parsed()) {
      return emit("curve", argv_echo, as_json, run_curve(curve_args));
    }
    if (bdd_cmd->parsed()) {
      return emit("bdd", argv_echo, as_json, run_bdd(bdd_args));
    }
    if (bounds_cmd->parsed()) {
      return emit("bounds", argv_echo, as_json, run_bounds(bounds_args));
    }
    std::cerr << "no command given\n";
    return 2;
  } catch (const mmrkit::Error& e) {
    std::cerr << "error (" << e.taxonomy() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
