#ifndef QVERIFY_POLICY_HPP
#define QVERIFY_POLICY_HPP

#include <Eigen/Dense>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qverify/channels.hpp"
#include "qverify/circuit.hpp"
#include "qverify/feature_map.hpp"
#include "qverify/mdp.hpp"
#include "qverify/vqc_policy.hpp"

namespace qverify {

// Memoryless stochastic policy: a deterministic function from state to a
// distribution over the environment's action set.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int n_actions() const = 0;
  virtual ActionDistribution distribution(const FeatureState& s) const = 0;
};

// Policies the REINFORCE trainer can update in place.
class TrainablePolicy : public Policy {
 public:
  virtual std::vector<double> parameters() const = 0;
  virtual void set_parameters(const std::vector<double>& params) = 0;
  virtual std::vector<double> grad_log_prob(const FeatureState& s,
                                            int action) const = 0;
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(int n_actions);
  int n_actions() const override { return n_actions_; }
  ActionDistribution distribution(const FeatureState& s) const override;

 private:
  int n_actions_;
};

// Probability 1 on the chosen action; querying a state missing from the
// table raises PolicyDomainError.
class TablePolicy final : public Policy {
 public:
  TablePolicy(std::unordered_map<FeatureState, int, FeatureStateHash> table,
              int n_actions);
  int n_actions() const override { return n_actions_; }
  ActionDistribution distribution(const FeatureState& s) const override;

 private:
  std::unordered_map<FeatureState, int, FeatureStateHash> table_;
  int n_actions_;
};

// Linear softmax over the mapped features plus a bias column.
class ClassicalSoftmaxPolicy final : public TrainablePolicy {
 public:
  // weights: n_actions x (mapped feature size + 1); last column is the bias
  ClassicalSoftmaxPolicy(Eigen::MatrixXd weights, FeatureMap map,
                         std::vector<FeatureRange> schema);
  // zero-initialized weights (uniform policy)
  static ClassicalSoftmaxPolicy zeros(int n_actions, const FeatureMap& map,
                                      const std::vector<FeatureRange>& schema);

  int n_actions() const override;
  ActionDistribution distribution(const FeatureState& s) const override;
  std::vector<double> parameters() const override;
  void set_parameters(const std::vector<double>& params) override;
  std::vector<double> grad_log_prob(const FeatureState& s,
                                    int action) const override;

  const Eigen::MatrixXd& weights() const { return weights_; }
  const FeatureMap& feature_map() const { return map_; }

 private:
  Eigen::VectorXd input_vector(const FeatureState& s) const;

  Eigen::MatrixXd weights_;
  FeatureMap map_;
  std::vector<FeatureRange> schema_;
};

// Variational-circuit policy: maps features through the layout, evaluates
// the circuit analytically, optionally with per-gate noise. Training
// requires the noise-free configuration.
class QuantumCircuitPolicy final : public TrainablePolicy {
 public:
  QuantumCircuitPolicy(CircuitSpec spec, ParameterVector theta, FeatureMap map,
                       std::vector<FeatureRange> schema, int n_actions,
                       NoiseSpec noise = NoiseSpec::none());

  int n_actions() const override { return n_actions_; }
  ActionDistribution distribution(const FeatureState& s) const override;
  std::vector<double> parameters() const override { return theta_; }
  void set_parameters(const std::vector<double>& params) override;
  std::vector<double> grad_log_prob(const FeatureState& s,
                                    int action) const override;

  const CircuitSpec& spec() const { return spec_; }
  const ParameterVector& theta() const { return theta_; }
  const FeatureMap& feature_map() const { return map_; }
  const NoiseSpec& noise() const { return noise_; }
  void set_noise(const NoiseSpec& noise) { noise_ = noise; }

 private:
  CircuitSpec spec_;
  ParameterVector theta_;
  FeatureMap map_;
  std::vector<FeatureRange> schema_;
  int n_actions_;
  NoiseSpec noise_;
};

// One policy evaluation per distinct state, shared across repeat queries.
// Wraps a policy whose distribution is expensive (the quantum one).
class CachingPolicy final : public Policy {
 public:
  explicit CachingPolicy(const Policy& inner) : inner_(inner) {}
  int n_actions() const override { return inner_.n_actions(); }
  ActionDistribution distribution(const FeatureState& s) const override;

 private:
  const Policy& inner_;
  mutable std::unordered_map<FeatureState, ActionDistribution, FeatureStateHash>
      cache_;
};

}  // namespace qverify

#endif
