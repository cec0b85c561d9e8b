#include "qverify/policy_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "qverify/environments.hpp"
#include "qverify/errors.hpp"
#include "qverify/sampling.hpp"

namespace qverify {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open policy file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("policy file parse failure in '" + path +
                      "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("policy file must be a JSON object");
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write policy file '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("write failure on '" + path + "'");
}

void reject_unknown_fields(const json& j,
                           const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown policy file field '" + key + "'");
    }
  }
}

void check_version_kind(const json& j, const std::string& kind) {
  if (!j.contains("version") || j.at("version").get<int>() != 1) {
    throw ConfigError("unsupported policy file version");
  }
  if (!j.contains("kind") || j.at("kind").get<std::string>() != kind) {
    throw ConfigError("expected policy kind '" + kind + "'");
  }
}

}  // namespace

void save_quantum_policy(const std::string& path,
                         const QuantumPolicyFile& file) {
  json j;
  j["version"] = 1;
  j["kind"] = "quantum";
  j["n_qubits"] = file.spec.n_qubits;
  j["n_layers"] = file.spec.n_layers;
  j["entangling_layers"] =
      std::vector<int>(file.spec.entangling_layers.begin(),
                       file.spec.entangling_layers.end());
  j["readout"] = readout_name(file.spec.readout);
  j["softmax_beta"] = file.spec.softmax_beta;
  j["append_bias"] = file.spec.append_bias;
  j["feature_layout"] = file.feature_layout;
  j["theta"] = file.theta;
  write_json(path, j);
}

QuantumPolicyFile load_quantum_policy(const std::string& path) {
  const json j = read_json(path);
  reject_unknown_fields(j, {"version", "kind", "n_qubits", "n_layers",
                            "entangling_layers", "readout", "softmax_beta",
                            "append_bias", "feature_layout", "theta"});
  check_version_kind(j, "quantum");
  QuantumPolicyFile file;
  try {
    file.spec.n_qubits = j.at("n_qubits").get<int>();
    file.spec.n_layers = j.at("n_layers").get<int>();
    const auto layers = j.at("entangling_layers").get<std::vector<int>>();
    file.spec.entangling_layers.clear();
    file.spec.entangling_layers.insert(layers.begin(), layers.end());
    file.spec.readout = readout_from_name(j.at("readout").get<std::string>());
    file.spec.softmax_beta = j.at("softmax_beta").get<double>();
    file.spec.append_bias = j.at("append_bias").get<bool>();
    file.feature_layout = j.at("feature_layout").get<std::string>();
    file.theta = j.at("theta").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError("malformed quantum policy file: " + std::string(e.what()));
  }
  if (file.spec.softmax_beta <= 0.0) {
    throw ConfigError("softmax_beta must be positive");
  }
  if (static_cast<int>(file.theta.size()) != parameter_count(file.spec)) {
    throw ConfigError("theta length does not match the circuit shape");
  }
  for (double t : file.theta) {
    if (!std::isfinite(t)) throw ConfigError("non-finite theta entry");
  }
  return file;
}

void save_classical_policy(const std::string& path,
                           const ClassicalPolicyFile& file) {
  json j;
  j["version"] = 1;
  j["kind"] = "classical";
  j["feature_layout"] = file.feature_layout;
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < file.weights.rows(); ++r) {
    rows.emplace_back(file.weights.row(r).begin(), file.weights.row(r).end());
  }
  j["weights"] = rows;
  write_json(path, j);
}

ClassicalPolicyFile load_classical_policy(const std::string& path) {
  const json j = read_json(path);
  reject_unknown_fields(j, {"version", "kind", "feature_layout", "weights"});
  check_version_kind(j, "classical");
  ClassicalPolicyFile file;
  try {
    file.feature_layout = j.at("feature_layout").get<std::string>();
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    if (rows.empty() || rows[0].empty()) {
      throw ConfigError("weights matrix is empty");
    }
    file.weights.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) {
        throw ConfigError("ragged weights matrix");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        file.weights(static_cast<Eigen::Index>(r),
                     static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed classical policy file: " +
                      std::string(e.what()));
  }
  return file;
}

std::string policy_file_kind(const std::string& path) {
  const json j = read_json(path);
  if (!j.contains("kind")) throw ConfigError("policy file has no 'kind' field");
  return j.at("kind").get<std::string>();
}

std::unique_ptr<Policy> load_table_policy(const std::string& path,
                                          const Mdp& mdp) {
  const json j = read_json(path);
  reject_unknown_fields(j, {"version", "kind", "entries"});
  check_version_kind(j, "table");
  const auto& action_names = mdp.actions();
  std::unordered_map<FeatureState, int, FeatureStateHash> table;
  try {
    for (const auto& entry : j.at("entries")) {
      reject_unknown_fields(entry, {"state", "action"});
      FeatureState s{entry.at("state").get<std::vector<int>>()};
      const std::string action = entry.at("action").get<std::string>();
      const auto it =
          std::find(action_names.begin(), action_names.end(), action);
      if (it == action_names.end()) {
        throw ConfigError("unknown action '" + action + "' in table policy");
      }
      table[s] = static_cast<int>(it - action_names.begin());
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed table policy file: " + std::string(e.what()));
  }
  return std::make_unique<TablePolicy>(std::move(table),
                                       static_cast<int>(action_names.size()));
}

std::unique_ptr<Policy> load_policy_for_env(const std::string& path,
                                            const Mdp& mdp,
                                            const NoiseSpec& noise) {
  const std::string kind = policy_file_kind(path);
  const int n_actions = static_cast<int>(mdp.actions().size());
  if (kind == "quantum") {
    QuantumPolicyFile file = load_quantum_policy(path);
    return std::make_unique<QuantumCircuitPolicy>(
        file.spec, file.theta, FeatureMap::parse(file.feature_layout),
        mdp.feature_schema(), n_actions, noise);
  }
  if (noise.enabled) {
    throw ConfigError("gate-level noise applies only to quantum policies");
  }
  if (kind == "classical") {
    ClassicalPolicyFile file = load_classical_policy(path);
    return std::make_unique<ClassicalSoftmaxPolicy>(
        file.weights, FeatureMap::parse(file.feature_layout),
        mdp.feature_schema());
  }
  if (kind == "table") return load_table_policy(path, mdp);
  throw ConfigError("unknown policy kind '" + kind + "'");
}

EnvPolicyDefaults env_policy_defaults(const std::string& env_name,
                                      const Mdp& mdp) {
  EnvPolicyDefaults d;
  const int n_actions = static_cast<int>(mdp.actions().size());
  if (env_name == "ski") {
    d.circuit.n_qubits = 3;  // 4 state bits + bias = 5 amplitudes
    d.circuit.append_bias = true;
    d.quantum_layout = "bits";
    d.classical_layout = "onehot";
  } else if (env_name == "frozen_lake") {
    d.circuit.n_qubits = 4;  // one-hot position over 16 cells, no bias
    d.circuit.append_bias = false;
    d.quantum_layout = "onehot_mod:16";
    d.classical_layout = "onehot";
  } else {
    d.quantum_layout = "raw";
    d.classical_layout = "raw";
    d.circuit.append_bias = true;
    const FeatureMap map = FeatureMap::parse(d.quantum_layout);
    const std::size_t amplitudes = map.output_size(mdp.feature_schema()) + 1;
    int qubits = 1;
    while ((std::size_t{1} << qubits) < amplitudes) ++qubits;
    d.circuit.n_qubits = std::max(qubits, n_actions);
  }
  return d;
}

ParameterVector initial_quantum_theta(const CircuitSpec& spec,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ParameterVector theta(static_cast<std::size_t>(parameter_count(spec)));
  for (double& t : theta) {
    t = (2.0 * uniform_double(rng) - 1.0) * std::numbers::pi;
  }
  return theta;
}

}  // namespace qverify
