// qverify: train, verify and sweep policies for the shipped environments.
// Results go to stdout, diagnostics to stderr. Exit codes: 0 ok, 2 config
// or parse/bind error, 3 diverged training, 4 state explosion, 5 solver
// failure, 1 anything else.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qverify/checker.hpp"
#include "qverify/dtmc.hpp"
#include "qverify/environments.hpp"
#include "qverify/errors.hpp"
#include "qverify/policy_io.hpp"
#include "qverify/sweep.hpp"
#include "qverify/training.hpp"

namespace {

using namespace qverify;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_seconds(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::size_t state_ceiling_from_env() {
  if (const char* raw = std::getenv("QVERIFY_STATE_CEILING")) {
    try {
      const long long v = std::stoll(raw);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError("QVERIFY_STATE_CEILING must be a positive integer");
  }
  return kDefaultStateCeiling;
}

struct PolicyChoice {
  std::unique_ptr<Policy> policy;
};

PolicyChoice resolve_policy(const std::string& spec, const Mdp& mdp,
                            const NoiseSpec& noise) {
  PolicyChoice choice;
  if (spec == "uniform") {
    if (noise.enabled) {
      throw ConfigError("gate-level noise applies only to quantum policies");
    }
    choice.policy =
        std::make_unique<UniformPolicy>(static_cast<int>(mdp.actions().size()));
  } else if (spec.rfind("optimal-table:", 0) == 0) {
    if (noise.enabled) {
      throw ConfigError("gate-level noise applies only to quantum policies");
    }
    choice.policy = load_table_policy(spec.substr(14), mdp);
  } else {
    choice.policy = load_policy_for_env(spec, mdp, noise);
  }
  return choice;
}

NoiseSpec noise_from_flags(const std::string& kind, double param,
                           bool kind_given, bool param_given) {
  if (!kind_given && !param_given) return NoiseSpec::none();
  if (!kind_given) throw ConfigError("--noise-param needs --noise");
  return NoiseSpec::after_each_gate(channel_kind_from_name(kind),
                                    param_given ? param : 0.0);
}

CheckOptions::Method solver_from_name(const std::string& name) {
  if (name == "auto") return CheckOptions::Method::Auto;
  if (name == "gauss_seidel") return CheckOptions::Method::GaussSeidel;
  if (name == "direct") return CheckOptions::Method::Direct;
  throw ConfigError("unknown solver '" + name + "'");
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string item =
        csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (item.empty()) throw ConfigError("empty grid entry");
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad grid value '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (grid.empty()) throw ConfigError("empty noise grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i] > grid[i + 1]) throw ConfigError("grid values must be sorted");
  }
  return grid;
}

double verify_goal_probability(const Mdp& mdp, const Policy& policy) {
  const Dtmc dtmc = build_induced_dtmc(mdp, policy);
  return check(dtmc, parse_property("P=? [ F Goal ]")).probability_at_initial;
}

int run_train(const std::string& env_name,
              const std::optional<std::string>& env_config,
              const std::string& kind, TrainConfig cfg,
              const std::string& baseline_name, const std::string& out_path,
              std::optional<std::string> log_path, std::optional<int> qubits,
              std::optional<int> layers,
              std::optional<std::string> entangling,
              std::optional<std::string> readout, std::optional<double> beta,
              std::optional<bool> bias, std::optional<std::string> layout,
              std::optional<double> lr) {
  const auto mdp = make_environment(env_name, env_config);
  EnvPolicyDefaults defaults = env_policy_defaults(env_name, *mdp);
  if (baseline_name == "moving_average") {
    cfg.baseline = Baseline::MovingAverage;
  } else if (baseline_name != "none") {
    throw ConfigError("unknown baseline '" + baseline_name + "'");
  }
  const int n_actions = static_cast<int>(mdp->actions().size());

  std::unique_ptr<TrainablePolicy> policy;
  std::string layout_name;
  if (kind == "quantum") {
    CircuitSpec spec = defaults.circuit;
    if (qubits) spec.n_qubits = *qubits;
    if (layers) spec.n_layers = *layers;
    if (entangling) {
      spec.entangling_layers.clear();
      for (double v : parse_grid(*entangling)) {
        spec.entangling_layers.insert(static_cast<int>(v));
      }
    }
    if (readout) spec.readout = readout_from_name(*readout);
    if (beta) spec.softmax_beta = *beta;
    if (bias) spec.append_bias = *bias;
    layout_name = layout.value_or(defaults.quantum_layout);
    cfg.learning_rate = lr.value_or(defaults.quantum_lr);
    policy = std::make_unique<QuantumCircuitPolicy>(
        spec, initial_quantum_theta(spec, cfg.seed),
        FeatureMap::parse(layout_name), mdp->feature_schema(), n_actions);
  } else if (kind == "classical") {
    layout_name = layout.value_or(defaults.classical_layout);
    cfg.learning_rate = lr.value_or(defaults.classical_lr);
    policy = std::make_unique<ClassicalSoftmaxPolicy>(ClassicalSoftmaxPolicy::zeros(
        n_actions, FeatureMap::parse(layout_name), mdp->feature_schema()));
  } else {
    throw ConfigError("unknown policy kind '" + kind + "'");
  }

  const TrainLog log = reinforce_train(*mdp, *policy, cfg);

  if (kind == "quantum") {
    const auto& qp = dynamic_cast<const QuantumCircuitPolicy&>(*policy);
    save_quantum_policy(out_path, {qp.spec(), qp.theta(), layout_name});
  } else {
    const auto& cp = dynamic_cast<const ClassicalSoftmaxPolicy&>(*policy);
    save_classical_policy(out_path, {cp.weights(), layout_name});
  }
  write_return_log_csv(log, log_path.value_or(out_path + ".returns.csv"));

  std::cout << "policy " << out_path << "\n";
  std::cout << "episodes " << cfg.episodes << "\n";
  std::cout << "final_p_goal " << fmt17(verify_goal_probability(*mdp, *policy))
            << "\n";
  return 0;
}

int run_verify(const std::string& env_name,
               const std::optional<std::string>& env_config,
               const std::string& policy_spec, const std::string& prop_text,
               const NoiseSpec& noise, double prob_floor,
               const std::string& solver) {
  const auto mdp = make_environment(env_name, env_config);
  const PctlProperty prop = parse_property(prop_text);
  const PolicyChoice choice = resolve_policy(policy_spec, *mdp, noise);
  const Dtmc dtmc = build_induced_dtmc(*mdp, *choice.policy, {}, prob_floor,
                                       state_ceiling_from_env());
  CheckOptions options;
  options.method = solver_from_name(solver);
  const CheckResult result = check(dtmc, prop, options);
  std::cout << "property " << to_string(prop) << "\n";
  std::cout << "probability " << fmt17(result.probability_at_initial) << "\n";
  std::cout << "states " << dtmc.stats.states << "\n";
  std::cout << "transitions " << dtmc.stats.transitions << "\n";
  std::cout << "build_seconds " << fmt_seconds(dtmc.stats.build_seconds) << "\n";
  std::cout << "check_seconds " << fmt_seconds(result.stats.check_seconds)
            << "\n";
  return 0;
}

int run_sweep_cmd(const std::string& env_name,
                  const std::optional<std::string>& env_config,
                  const std::string& policy_path, const std::string& prop_text,
                  const std::string& noise_kind, const std::string& grid_csv,
                  const std::string& out_csv, int jobs, double prob_floor,
                  const std::string& solver) {
  const auto mdp = make_environment(env_name, env_config);
  const PctlProperty prop = parse_property(prop_text);
  const QuantumPolicyFile policy = load_quantum_policy(policy_path);

  SweepConfig config;
  config.noise_kind = channel_kind_from_name(noise_kind);
  config.grid = parse_grid(grid_csv);
  config.parallelism = jobs;
  config.prob_floor = prob_floor;
  config.state_ceiling = state_ceiling_from_env();
  config.check.method = solver_from_name(solver);

  const std::vector<SweepRow> rows = run_sweep(*mdp, policy, prop, config);
  write_sweep_csv(out_csv, config.noise_kind, rows);

  std::size_t failures = 0;
  for (const SweepRow& row : rows) {
    if (row.status != "ok") ++failures;
  }
  std::cout << "csv " << out_csv << "\n";
  std::cout << "rows " << rows.size() << "\n";
  if (failures == rows.size()) {
    std::cerr << "all sweep points failed\n";
    return 1;
  }
  return 0;
}

int run_export(const std::string& env_name,
               const std::optional<std::string>& env_config,
               const std::string& policy_spec, const std::string& out_path) {
  const auto mdp = make_environment(env_name, env_config);
  const PolicyChoice choice =
      resolve_policy(policy_spec, *mdp, NoiseSpec::none());
  const Dtmc dtmc = build_induced_dtmc(*mdp, *choice.policy, {}, 0.0,
                                       state_ceiling_from_env());
  export_dtmc(dtmc, out_path);
  std::cout << "dtmc " << out_path << "\n";
  std::cout << "states " << dtmc.stats.states << "\n";
  std::cout << "transitions " << dtmc.stats.transitions << "\n";
  return 0;
}

int run_env_info(const std::string& env_name,
                 const std::optional<std::string>& env_config) {
  const auto mdp = make_environment(env_name, env_config);
  std::cout << "environment " << env_name << "\n";
  std::cout << "actions";
  for (const std::string& a : mdp->actions()) std::cout << ' ' << a;
  std::cout << "\nfeatures";
  for (const FeatureRange& f : mdp->feature_schema()) {
    std::cout << ' ' << f.name << ':' << f.min << ".." << f.max;
  }
  std::cout << "\nlabels";
  for (const std::string& l : mdp->label_names()) std::cout << ' ' << l;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification of quantum and classical RL policies"};
  app.require_subcommand(1);

  std::string env_name, policy_spec, prop_text, out_path, kind = "quantum";
  std::string noise_kind, solver = "auto", baseline = "none";
  std::string grid_csv, log_path_raw, layout_raw, entangling_raw, readout_raw;
  std::optional<std::string> env_config;
  double noise_param = 0.0, prob_floor = 0.0;
  bool noise_kind_given = false, noise_param_given = false;
  int jobs = 1;
  TrainConfig cfg;

  auto add_env = [&](CLI::App* cmd) {
    cmd->add_option("--env", env_name, "environment name")->required();
    cmd->add_option("--env-config", env_config,
                    "environment config file (freeway)");
  };

  CLI::App* train = app.add_subcommand("train", "train a policy with REINFORCE");
  add_env(train);
  train->add_option("--kind", kind, "quantum or classical");
  train->add_option("--episodes", cfg.episodes, "training episodes");
  train->add_option("--gamma", cfg.gamma, "discount factor");
  double lr_raw = -1.0;
  auto* lr_opt = train->add_option("--lr", lr_raw, "learning rate");
  train->add_option("--max-steps", cfg.max_steps, "episode step cap");
  train->add_option("--seed", cfg.seed, "RNG seed");
  train->add_option("--baseline", baseline, "none or moving_average");
  train->add_option("-o,--out", out_path, "policy file path")->required();
  auto* log_opt = train->add_option("--log", log_path_raw, "return log CSV path");
  int qubits_raw = 0, layers_raw = 0;
  auto* qubits_opt = train->add_option("--qubits", qubits_raw, "circuit qubits");
  auto* layers_opt = train->add_option("--layers", layers_raw, "circuit layers");
  auto* ent_opt = train->add_option("--entangling", entangling_raw,
                                    "entangling layer indices, comma separated");
  auto* readout_opt =
      train->add_option("--readout", readout_raw, "z_softmax or basis_marginal");
  double beta_raw = 0.0;
  auto* beta_opt = train->add_option("--beta", beta_raw, "softmax beta");
  bool bias_raw = true;
  auto* bias_opt = train->add_flag("--bias,!--no-bias", bias_raw,
                                   "append bias amplitude");
  auto* layout_opt = train->add_option("--layout", layout_raw, "feature layout");

  CLI::App* verify = app.add_subcommand("verify", "check a PCTL property");
  add_env(verify);
  verify->add_option("--policy", policy_spec,
                     "policy file, 'uniform', or 'optimal-table:<file>'")
      ->required();
  verify->add_option("--prop", prop_text, "PCTL property string")->required();
  auto* nk = verify->add_option("--noise", noise_kind, "noise channel kind");
  auto* np = verify->add_option("--noise-param", noise_param,
                                "noise parameter in [0,1]");
  verify->add_option("--prob-floor", prob_floor, "successor probability floor");
  verify->add_option("--solver", solver, "auto, gauss_seidel or direct");

  CLI::App* sweep = app.add_subcommand("sweep", "verify across a noise grid");
  add_env(sweep);
  sweep->add_option("--policy", policy_spec, "quantum policy file")->required();
  sweep->add_option("--prop", prop_text, "PCTL property string")->required();
  sweep->add_option("--noise", noise_kind, "noise channel kind")->required();
  sweep->add_option("--grid", grid_csv, "comma-separated noise parameters")
      ->required();
  sweep->add_option("-o,--out", out_path, "output CSV path")->required();
  sweep->add_option("--jobs", jobs, "parallel verification degree");
  sweep->add_option("--prob-floor", prob_floor, "successor probability floor");
  sweep->add_option("--solver", solver, "auto, gauss_seidel or direct");

  CLI::App* exp = app.add_subcommand("export", "write the induced DTMC file");
  add_env(exp);
  exp->add_option("--policy", policy_spec,
                  "policy file, 'uniform', or 'optimal-table:<file>'")
      ->required();
  exp->add_option("-o,--out", out_path, "output DTMC path")->required();

  CLI::App* info = app.add_subcommand("env-info", "print environment schema");
  add_env(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) {
      return run_train(
          env_name, env_config, kind, cfg, baseline, out_path,
          log_opt->count() ? std::optional<std::string>(log_path_raw)
                           : std::nullopt,
          qubits_opt->count() ? std::optional<int>(qubits_raw) : std::nullopt,
          layers_opt->count() ? std::optional<int>(layers_raw) : std::nullopt,
          ent_opt->count() ? std::optional<std::string>(entangling_raw)
                           : std::nullopt,
          readout_opt->count() ? std::optional<std::string>(readout_raw)
                               : std::nullopt,
          beta_opt->count() ? std::optional<double>(beta_raw) : std::nullopt,
          bias_opt->count() ? std::optional<bool>(bias_raw) : std::nullopt,
          layout_opt->count() ? std::optional<std::string>(layout_raw)
                              : std::nullopt,
          lr_opt->count() ? std::optional<double>(lr_raw) : std::nullopt);
    }
    if (verify->parsed()) {
      return run_verify(env_name, env_config, policy_spec, prop_text,
                        noise_from_flags(noise_kind, noise_param, nk->count(),
                                         np->count()),
                        prob_floor, solver);
    }
    if (sweep->parsed()) {
      return run_sweep_cmd(env_name, env_config, policy_spec, prop_text,
                           noise_kind, grid_csv, out_path, jobs, prob_floor,
                           solver);
    }
    if (exp->parsed()) {
      return run_export(env_name, env_config, policy_spec, out_path);
    }
    if (info->parsed()) {
      return run_env_info(env_name, env_config);
    }
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ExplosionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BindError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PolicyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EncodingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
