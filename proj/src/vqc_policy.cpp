#include "qverify/vqc_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qverify/errors.hpp"

namespace qverify {

namespace {

void check_action_count(const CircuitSpec& spec, int n_actions) {
  if (n_actions < 1) throw ConfigError("need at least one action");
  if (spec.readout == Readout::ZSoftmax && n_actions > spec.n_qubits) {
    throw ConfigError("z_softmax readout needs n_actions <= n_qubits");
  }
  if (spec.readout == Readout::BasisMarginal &&
      static_cast<std::size_t>(n_actions) > (std::size_t{1} << spec.n_qubits)) {
    throw ConfigError("basis_marginal readout needs n_actions <= 2^n_qubits");
  }
}

DensityMatrix run_circuit(const CircuitSpec& spec, const ParameterVector& theta,
                          const NoiseSpec& noise,
                          const std::vector<std::int64_t>& features) {
  DensityMatrix rho = amplitude_encode(features, spec.n_qubits, spec.append_bias);
  KrausChannel channel;
  if (noise.enabled) channel = make_channel(noise.kind, noise.param);
  for (const UnitaryGate& gate : gate_sequence(spec, theta)) {
    rho = apply_unitary(rho, gate);
    if (noise.enabled) {
      for (int q : gate.targets) rho = apply_channel(rho, channel, q);
    }
  }
  return rho;
}

int marginal_qubits(int n_actions) {
  int k = 0;
  while ((1 << k) < n_actions) ++k;
  return k;
}

// Raw readout values of the final state: Z expectations of the first
// n_actions qubits, or basis marginals over the first ceil(log2 n_actions)
// qubits (before renormalization).
std::vector<double> raw_readout(const CircuitSpec& spec,
                                const DensityMatrix& rho, int n_actions) {
  if (spec.readout == Readout::ZSoftmax) {
    std::vector<double> z(n_actions);
    for (int q = 0; q < n_actions; ++q) z[q] = z_expectation(rho, q);
    return z;
  }
  const int k = marginal_qubits(n_actions);
  const std::vector<double> probs = measurement_probs(rho);
  std::vector<double> marginal(std::size_t{1} << k, 0.0);
  const int shift = rho.n_qubits - k;
  for (std::size_t x = 0; x < probs.size(); ++x) {
    marginal[x >> shift] += probs[x];
  }
  return marginal;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

ActionDistribution readout_to_distribution(const CircuitSpec& spec,
                                           const std::vector<double>& raw,
                                           int n_actions) {
  ActionDistribution dist;
  if (spec.readout == Readout::ZSoftmax) {
    std::vector<double> logits(raw.begin(), raw.begin() + n_actions);
    for (double& v : logits) v *= spec.softmax_beta;
    dist.probs = softmax(logits);
  } else {
    double total = 0.0;
    for (int a = 0; a < n_actions; ++a) total += raw[a];
    if (total < 1e-12) {
      throw NumericalError("basis_marginal mass below 1e-12 over kept outcomes");
    }
    dist.probs.resize(n_actions);
    for (int a = 0; a < n_actions; ++a) dist.probs[a] = raw[a] / total;
  }
  validate_distribution(dist);
  return dist;
}

}  // namespace

void validate_distribution(ActionDistribution& dist) {
  double total = 0.0;
  for (double& p : dist.probs) {
    if (p < -1e-12) {
      throw NumericalError("negative action probability " + std::to_string(p));
    }
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw NumericalError("action probabilities sum to " + std::to_string(total));
  }
}

DensityMatrix amplitude_encode(const std::vector<std::int64_t>& features,
                               int n_qubits, bool append_bias) {
  if (n_qubits < 1) throw EncodingError("need at least one qubit");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t len = features.size() + (append_bias ? 1 : 0);
  if (len > dim) {
    throw EncodingError("feature count " + std::to_string(len) +
                        " exceeds 2^" + std::to_string(n_qubits));
  }
  CVec amps = CVec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < features.size(); ++i) {
    amps[static_cast<Eigen::Index>(i)] = static_cast<double>(features[i]);
  }
  if (append_bias) amps[static_cast<Eigen::Index>(features.size())] = 1.0;
  const double norm = amps.norm();
  if (norm == 0.0) {
    throw EncodingError("all-zero feature vector has no amplitude encoding");
  }
  return density_from_amplitudes(amps / norm);
}

ActionDistribution policy_distribution(const CircuitSpec& spec,
                                       const ParameterVector& theta,
                                       const NoiseSpec& noise,
                                       const std::vector<std::int64_t>& features,
                                       int n_actions) {
  check_action_count(spec, n_actions);
  const DensityMatrix rho = run_circuit(spec, theta, noise, features);
  return readout_to_distribution(spec, raw_readout(spec, rho, n_actions),
                                 n_actions);
}

std::vector<double> log_prob_gradient(const CircuitSpec& spec,
                                      const ParameterVector& theta,
                                      const std::vector<std::int64_t>& features,
                                      int action, int n_actions) {
  check_action_count(spec, n_actions);
  if (action < 0 || action >= n_actions) {
    throw ParameterError("action index " + std::to_string(action) +
                         " out of range");
  }
  if (static_cast<int>(theta.size()) != parameter_count(spec)) {
    throw ParameterError("parameter vector length mismatch");
  }
  const NoiseSpec no_noise = NoiseSpec::none();
  const auto eval = [&](const ParameterVector& t) {
    return raw_readout(spec, run_circuit(spec, t, no_noise, features), n_actions);
  };

  const std::vector<double> base = eval(theta);
  const std::size_t n_params = theta.size();
  const std::size_t n_out = base.size();
  // shift[k][j] = d(raw_j)/d(theta_k); rotations have Pauli/2 generators, so
  // the +-pi/2 shift rule is exact here.
  std::vector<std::vector<double>> shift(n_params);
  ParameterVector t = theta;
  for (std::size_t k = 0; k < n_params; ++k) {
    const double saved = t[k];
    t[k] = saved + std::numbers::pi / 2.0;
    const std::vector<double> plus = eval(t);
    t[k] = saved - std::numbers::pi / 2.0;
    const std::vector<double> minus = eval(t);
    t[k] = saved;
    shift[k].resize(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
      shift[k][j] = 0.5 * (plus[j] - minus[j]);
    }
  }

  std::vector<double> grad(n_params, 0.0);
  if (spec.readout == Readout::ZSoftmax) {
    std::vector<double> logits(base.begin(), base.begin() + n_actions);
    for (double& v : logits) v *= spec.softmax_beta;
    const std::vector<double> pi = softmax(logits);
    for (std::size_t k = 0; k < n_params; ++k) {
      double mean = 0.0;
      for (int b = 0; b < n_actions; ++b) mean += pi[b] * shift[k][b];
      grad[k] = spec.softmax_beta * (shift[k][action] - mean);
    }
  } else {
    double mass = 0.0;
    for (int b = 0; b < n_actions; ++b) mass += base[b];
    if (mass < 1e-12 || base[action] <= 0.0) {
      throw NumericalError("log-probability undefined at zero mass");
    }
    for (std::size_t k = 0; k < n_params; ++k) {
      double dmass = 0.0;
      for (int b = 0; b < n_actions; ++b) dmass += shift[k][b];
      grad[k] = shift[k][action] / base[action] - dmass / mass;
    }
  }
  return grad;
}

}  // namespace qverify
