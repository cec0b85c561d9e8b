#ifndef QVERIFY_CIRCUIT_HPP
#define QVERIFY_CIRCUIT_HPP

#include <set>
#include <string>
#include <vector>

#include "qverify/gates.hpp"

namespace qverify {

enum class Readout { ZSoftmax, BasisMarginal };

std::string readout_name(Readout r);
Readout readout_from_name(const std::string& name);

// Layered hardware ansatz: every layer applies RX, RY, RZ to each qubit;
// layers listed in entangling_layers end in a CNOT ring q -> (q+1) mod n.
// State preparation amplitude-encodes the input features, optionally with a
// constant bias amplitude appended.
struct CircuitSpec {
  int n_qubits = 4;
  int n_layers = 2;
  std::set<int> entangling_layers = {0};
  Readout readout = Readout::ZSoftmax;
  double softmax_beta = 1.0;
  bool append_bias = true;
};

// Trainable rotation angles, radians. Consumed layer-major, qubit-major,
// rotation-minor (RX, RY, RZ): theta[(layer * n_qubits + qubit) * 3 + rot].
using ParameterVector = std::vector<double>;

int parameter_count(const CircuitSpec& spec);

// All gates of the circuit in application order. Throws ParameterError on a
// length mismatch. The CNOT ring is empty for a single qubit.
std::vector<UnitaryGate> gate_sequence(const CircuitSpec& spec,
                                       const ParameterVector& theta);

}  // namespace qverify

#endif
