#include "qverify/policy.hpp"

#include <cmath>

#include "qverify/errors.hpp"

namespace qverify {

UniformPolicy::UniformPolicy(int n_actions) : n_actions_(n_actions) {
  if (n_actions < 1) throw ConfigError("need at least one action");
}

ActionDistribution UniformPolicy::distribution(const FeatureState&) const {
  ActionDistribution dist;
  dist.probs.assign(static_cast<std::size_t>(n_actions_), 1.0 / n_actions_);
  return dist;
}

TablePolicy::TablePolicy(
    std::unordered_map<FeatureState, int, FeatureStateHash> table,
    int n_actions)
    : table_(std::move(table)), n_actions_(n_actions) {
  for (const auto& [state, action] : table_) {
    if (action < 0 || action >= n_actions_) {
      throw ConfigError("table action index " + std::to_string(action) +
                        " out of range");
    }
  }
}

ActionDistribution TablePolicy::distribution(const FeatureState& s) const {
  const auto it = table_.find(s);
  if (it == table_.end()) {
    std::string repr;
    for (int v : s.values) repr += (repr.empty() ? "" : ",") + std::to_string(v);
    throw PolicyDomainError("table policy has no entry for state (" + repr + ")");
  }
  ActionDistribution dist;
  dist.probs.assign(static_cast<std::size_t>(n_actions_), 0.0);
  dist.probs[static_cast<std::size_t>(it->second)] = 1.0;
  return dist;
}

ClassicalSoftmaxPolicy::ClassicalSoftmaxPolicy(Eigen::MatrixXd weights,
                                               FeatureMap map,
                                               std::vector<FeatureRange> schema)
    : weights_(std::move(weights)), map_(map), schema_(std::move(schema)) {
  const auto expected =
      static_cast<Eigen::Index>(map_.output_size(schema_)) + 1;
  if (weights_.cols() != expected) {
    throw ConfigError("weight matrix has " + std::to_string(weights_.cols()) +
                      " columns, expected " + std::to_string(expected));
  }
  if (weights_.rows() < 1) throw ConfigError("need at least one action row");
  if (!weights_.allFinite()) throw ConfigError("non-finite policy weights");
}

ClassicalSoftmaxPolicy ClassicalSoftmaxPolicy::zeros(
    int n_actions, const FeatureMap& map,
    const std::vector<FeatureRange>& schema) {
  return ClassicalSoftmaxPolicy(
      Eigen::MatrixXd::Zero(n_actions,
                            static_cast<Eigen::Index>(map.output_size(schema)) + 1),
      map, schema);
}

int ClassicalSoftmaxPolicy::n_actions() const {
  return static_cast<int>(weights_.rows());
}

Eigen::VectorXd ClassicalSoftmaxPolicy::input_vector(
    const FeatureState& s) const {
  const std::vector<std::int64_t> mapped = map_.apply(s, schema_);
  Eigen::VectorXd x(static_cast<Eigen::Index>(mapped.size()) + 1);
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = static_cast<double>(mapped[i]);
  }
  x[x.size() - 1] = 1.0;  // bias
  return x;
}

ActionDistribution ClassicalSoftmaxPolicy::distribution(
    const FeatureState& s) const {
  const Eigen::VectorXd logits = weights_ * input_vector(s);
  const double top = logits.maxCoeff();
  ActionDistribution dist;
  dist.probs.resize(static_cast<std::size_t>(logits.size()));
  double total = 0.0;
  for (Eigen::Index a = 0; a < logits.size(); ++a) {
    dist.probs[static_cast<std::size_t>(a)] = std::exp(logits[a] - top);
    total += dist.probs[static_cast<std::size_t>(a)];
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

std::vector<double> ClassicalSoftmaxPolicy::parameters() const {
  std::vector<double> out(static_cast<std::size_t>(weights_.size()));
  Eigen::Map<Eigen::MatrixXd>(out.data(), weights_.rows(), weights_.cols()) =
      weights_;
  return out;
}

void ClassicalSoftmaxPolicy::set_parameters(const std::vector<double>& params) {
  if (params.size() != static_cast<std::size_t>(weights_.size())) {
    throw ParameterError("parameter vector length mismatch");
  }
  weights_ = Eigen::Map<const Eigen::MatrixXd>(params.data(), weights_.rows(),
                                               weights_.cols());
}

std::vector<double> ClassicalSoftmaxPolicy::grad_log_prob(const FeatureState& s,
                                                          int action) const {
  if (action < 0 || action >= n_actions()) {
    throw ParameterError("action index out of range");
  }
  const Eigen::VectorXd x = input_vector(s);
  const ActionDistribution dist = distribution(s);
  // d log pi(a|s) / d W[b] = (1[b = a] - pi(b|s)) * x
  Eigen::MatrixXd grad(weights_.rows(), weights_.cols());
  for (Eigen::Index b = 0; b < weights_.rows(); ++b) {
    const double coeff =
        (b == action ? 1.0 : 0.0) - dist.probs[static_cast<std::size_t>(b)];
    grad.row(b) = coeff * x.transpose();
  }
  std::vector<double> out(static_cast<std::size_t>(grad.size()));
  Eigen::Map<Eigen::MatrixXd>(out.data(), grad.rows(), grad.cols()) = grad;
  return out;
}

QuantumCircuitPolicy::QuantumCircuitPolicy(CircuitSpec spec,
                                           ParameterVector theta,
                                           FeatureMap map,
                                           std::vector<FeatureRange> schema,
                                           int n_actions, NoiseSpec noise)
    : spec_(std::move(spec)),
      theta_(std::move(theta)),
      map_(map),
      schema_(std::move(schema)),
      n_actions_(n_actions),
      noise_(noise) {
  if (static_cast<int>(theta_.size()) != parameter_count(spec_)) {
    throw ParameterError("parameter vector length mismatch");
  }
  const std::size_t encoded =
      map_.output_size(schema_) + (spec_.append_bias ? 1 : 0);
  if (encoded > (std::size_t{1} << spec_.n_qubits)) {
    throw EncodingError("feature layout does not fit on " +
                        std::to_string(spec_.n_qubits) + " qubits");
  }
}

ActionDistribution QuantumCircuitPolicy::distribution(
    const FeatureState& s) const {
  return policy_distribution(spec_, theta_, noise_, map_.apply(s, schema_),
                             n_actions_);
}

void QuantumCircuitPolicy::set_parameters(const std::vector<double>& params) {
  if (params.size() != theta_.size()) {
    throw ParameterError("parameter vector length mismatch");
  }
  theta_ = params;
}

std::vector<double> QuantumCircuitPolicy::grad_log_prob(const FeatureState& s,
                                                        int action) const {
  if (noise_.enabled) {
    throw InvalidParameter("gradients require the noise-free policy");
  }
  return log_prob_gradient(spec_, theta_, map_.apply(s, schema_), action,
                           n_actions_);
}

ActionDistribution CachingPolicy::distribution(const FeatureState& s) const {
  auto it = cache_.find(s);
  if (it == cache_.end()) {
    it = cache_.emplace(s, inner_.distribution(s)).first;
  }
  return it->second;
}

}  // namespace qverify
