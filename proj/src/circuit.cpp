#include "qverify/circuit.hpp"

#include "qverify/errors.hpp"

namespace qverify {

std::string readout_name(Readout r) {
  return r == Readout::ZSoftmax ? "z_softmax" : "basis_marginal";
}

Readout readout_from_name(const std::string& name) {
  if (name == "z_softmax") return Readout::ZSoftmax;
  if (name == "basis_marginal") return Readout::BasisMarginal;
  throw ConfigError("unknown readout '" + name + "'");
}

int parameter_count(const CircuitSpec& spec) {
  return spec.n_qubits * 3 * spec.n_layers;
}

std::vector<UnitaryGate> gate_sequence(const CircuitSpec& spec,
                                       const ParameterVector& theta) {
  if (spec.n_qubits < 1 || spec.n_layers < 1) {
    throw ConfigError("circuit needs at least one qubit and one layer");
  }
  const int expected = parameter_count(spec);
  if (static_cast<int>(theta.size()) != expected) {
    throw ParameterError("expected " + std::to_string(expected) +
                         " parameters, got " + std::to_string(theta.size()));
  }
  std::vector<UnitaryGate> gates;
  gates.reserve(theta.size() + spec.entangling_layers.size() * spec.n_qubits);
  int next = 0;
  for (int layer = 0; layer < spec.n_layers; ++layer) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      gates.push_back(UnitaryGate::rx(theta[next++], q));
      gates.push_back(UnitaryGate::ry(theta[next++], q));
      gates.push_back(UnitaryGate::rz(theta[next++], q));
    }
    if (spec.entangling_layers.count(layer) && spec.n_qubits > 1) {
      for (int q = 0; q < spec.n_qubits; ++q) {
        gates.push_back(UnitaryGate::cnot(q, (q + 1) % spec.n_qubits));
      }
    }
  }
  return gates;
}

}  // namespace qverify
