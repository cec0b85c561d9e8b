#ifndef QVERIFY_VQC_POLICY_HPP
#define QVERIFY_VQC_POLICY_HPP

#include <cstdint>
#include <vector>

#include "qverify/channels.hpp"
#include "qverify/circuit.hpp"
#include "qverify/density_matrix.hpp"

namespace qverify {

// Probability distribution over the environment's action set.
struct ActionDistribution {
  std::vector<double> probs;
};

// Asserts entries >= 0 and sum within 1e-10 of 1; clamps negative dust.
void validate_distribution(ActionDistribution& dist);

// Features (optionally appended with a constant 1), zero-padded to 2^n,
// L2-normalized and lifted to a pure density matrix. Scaling the input by
// any c > 0 yields the same state.
DensityMatrix amplitude_encode(const std::vector<std::int64_t>& features,
                               int n_qubits, bool append_bias);

// Full policy evaluation: encode, run the circuit (noise channels applied
// to each gate's target qubits after the gate when enabled), read out.
//
// z_softmax:      probs = softmax(beta * <Z_q>) over q = 0..n_actions-1.
// basis_marginal: p_a marginal over the first ceil(log2 n_actions) qubits,
//                 renormalized over the first n_actions outcomes.
ActionDistribution policy_distribution(const CircuitSpec& spec,
                                       const ParameterVector& theta,
                                       const NoiseSpec& noise,
                                       const std::vector<std::int64_t>& features,
                                       int n_actions);

// d/d theta of log pi_theta(action | features), noise-free, via the
// parameter-shift rule (evaluations at theta_k +- pi/2) chained through the
// readout. Two circuit evaluations per parameter.
std::vector<double> log_prob_gradient(const CircuitSpec& spec,
                                      const ParameterVector& theta,
                                      const std::vector<std::int64_t>& features,
                                      int action, int n_actions);

}  // namespace qverify

#endif
