#ifndef QVERIFY_POLICY_IO_HPP
#define QVERIFY_POLICY_IO_HPP

#include <memory>
#include <string>

#include "qverify/policy.hpp"

namespace qverify {

// Policy files are JSON with fixed field names; unknown fields are
// rejected.
//
// quantum:   {version, kind:"quantum", n_qubits, n_layers,
//             entangling_layers, readout, softmax_beta, append_bias,
//             feature_layout, theta}
// classical: {version, kind:"classical", feature_layout, weights}
// table:     {version, kind:"table", entries:[{state, action}]}
//            (action is an action name of the target environment)

struct QuantumPolicyFile {
  CircuitSpec spec;
  ParameterVector theta;
  std::string feature_layout;
};

struct ClassicalPolicyFile {
  Eigen::MatrixXd weights;
  std::string feature_layout;
};

void save_quantum_policy(const std::string& path, const QuantumPolicyFile& file);
QuantumPolicyFile load_quantum_policy(const std::string& path);

void save_classical_policy(const std::string& path,
                           const ClassicalPolicyFile& file);
ClassicalPolicyFile load_classical_policy(const std::string& path);

// Kind field of a policy file ("quantum", "classical", "table").
std::string policy_file_kind(const std::string& path);

// Instantiates any policy file against an environment. Noise applies only
// to quantum policies (ConfigError otherwise).
std::unique_ptr<Policy> load_policy_for_env(const std::string& path,
                                            const Mdp& mdp,
                                            const NoiseSpec& noise);

std::unique_ptr<Policy> load_table_policy(const std::string& path,
                                          const Mdp& mdp);

// Per-environment training defaults. Layouts, circuit shapes and learning
// rates are artifact configuration, recorded here and in the README.
struct EnvPolicyDefaults {
  CircuitSpec circuit;
  std::string quantum_layout;
  std::string classical_layout;
  double quantum_lr = 0.05;
  double classical_lr = 0.01;
};

EnvPolicyDefaults env_policy_defaults(const std::string& env_name,
                                      const Mdp& mdp);

// Seeded uniform draw from [-pi, pi] per parameter.
ParameterVector initial_quantum_theta(const CircuitSpec& spec,
                                      std::uint64_t seed);

}  // namespace qverify

#endif
