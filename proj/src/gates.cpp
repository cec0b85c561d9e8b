#include "qverify/gates.hpp"

#include <cmath>
#include <unordered_set>

#include "qverify/errors.hpp"

namespace qverify {

namespace {

const Cplx kI{0.0, 1.0};

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

UnitaryGate single(GateKind kind, double angle, int qubit) {
  UnitaryGate g;
  g.kind = kind;
  g.angle = angle;
  g.targets = {qubit};
  return g;
}

// Basis index of the k-qubit subspace spelled by the target bits, grouped
// by the remaining bits: indices[g * 2^k + s] is the full-space basis index
// whose target qubits (in order) spell s and whose other qubits spell g.
std::vector<std::size_t> embedding_indices(const std::vector<int>& targets,
                                           int n_qubits) {
  const int k = static_cast<int>(targets.size());
  std::vector<std::size_t> target_bit(k);
  std::unordered_set<int> target_set;
  for (int i = 0; i < k; ++i) {
    const int q = targets[i];
    if (q < 0 || q >= n_qubits) {
      throw QubitIndexError("target qubit " + std::to_string(q) +
                            " out of range for " + std::to_string(n_qubits) +
                            " qubits");
    }
    if (!target_set.insert(q).second) {
      throw QubitIndexError("duplicate target qubit " + std::to_string(q));
    }
    target_bit[i] = std::size_t{1} << (n_qubits - 1 - q);
  }
  std::vector<std::size_t> rest_bit;
  for (int q = 0; q < n_qubits; ++q) {
    if (!target_set.count(q)) rest_bit.push_back(std::size_t{1} << (n_qubits - 1 - q));
  }

  const std::size_t sub = std::size_t{1} << k;
  const std::size_t groups = std::size_t{1} << rest_bit.size();
  std::vector<std::size_t> indices(groups * sub);
  for (std::size_t g = 0; g < groups; ++g) {
    std::size_t base = 0;
    for (std::size_t b = 0; b < rest_bit.size(); ++b) {
      if ((g >> (rest_bit.size() - 1 - b)) & 1u) base |= rest_bit[b];
    }
    for (std::size_t s = 0; s < sub; ++s) {
      std::size_t idx = base;
      for (int b = 0; b < k; ++b) {
        if ((s >> (k - 1 - b)) & 1u) idx |= target_bit[b];
      }
      indices[g * sub + s] = idx;
    }
  }
  return indices;
}

}  // namespace

UnitaryGate UnitaryGate::rx(double angle, int qubit) {
  return single(GateKind::RX, angle, qubit);
}
UnitaryGate UnitaryGate::ry(double angle, int qubit) {
  return single(GateKind::RY, angle, qubit);
}
UnitaryGate UnitaryGate::rz(double angle, int qubit) {
  return single(GateKind::RZ, angle, qubit);
}
UnitaryGate UnitaryGate::x(int qubit) { return single(GateKind::X, 0, qubit); }
UnitaryGate UnitaryGate::y(int qubit) { return single(GateKind::Y, 0, qubit); }
UnitaryGate UnitaryGate::z(int qubit) { return single(GateKind::Z, 0, qubit); }
UnitaryGate UnitaryGate::h(int qubit) { return single(GateKind::H, 0, qubit); }

UnitaryGate UnitaryGate::cnot(int control, int target) {
  if (control == target) {
    throw QubitIndexError("cnot control equals target");
  }
  UnitaryGate g;
  g.kind = GateKind::CNOT;
  g.targets = {control, target};
  return g;
}

UnitaryGate UnitaryGate::custom(const CMat& matrix, std::vector<int> targets) {
  const auto dim = matrix.rows();
  if (matrix.cols() != dim ||
      dim != Eigen::Index(std::size_t{1} << targets.size())) {
    throw InvalidParameter("custom gate matrix shape does not match targets");
  }
  const double unitarity =
      (matrix.adjoint() * matrix - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10) {
    throw InvalidParameter("custom gate is not unitary (error " +
                           std::to_string(unitarity) + ")");
  }
  std::unordered_set<int> seen(targets.begin(), targets.end());
  if (seen.size() != targets.size()) {
    throw QubitIndexError("duplicate target qubit in custom gate");
  }
  UnitaryGate g;
  g.kind = GateKind::Custom;
  g.targets = std::move(targets);
  g.matrix = matrix;
  return g;
}

CMat UnitaryGate::local_matrix() const {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  CMat m;
  switch (kind) {
    case GateKind::RX:
      m.resize(2, 2);
      m << c, -kI * s, -kI * s, c;
      return m;
    case GateKind::RY:
      m.resize(2, 2);
      m << c, -s, s, c;
      return m;
    case GateKind::RZ:
      m.resize(2, 2);
      m << std::exp(-kI * (angle / 2.0)), 0, 0, std::exp(kI * (angle / 2.0));
      return m;
    case GateKind::X:
      return pauli_x();
    case GateKind::Y:
      return pauli_y();
    case GateKind::Z:
      return pauli_z();
    case GateKind::H:
      m.resize(2, 2);
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    case GateKind::CNOT:
      m = CMat::Zero(4, 4);
      m(0, 0) = 1;
      m(1, 1) = 1;
      m(2, 3) = 1;
      m(3, 2) = 1;
      return m;
    case GateKind::Custom:
      return matrix;
  }
  throw InvalidParameter("unknown gate kind");
}

CMat embed_apply_left(const CMat& m, const std::vector<int>& targets,
                      int n_qubits, const CMat& a) {
  const auto indices = embedding_indices(targets, n_qubits);
  const std::size_t sub = std::size_t{1} << targets.size();
  const std::size_t groups = indices.size() / sub;
  CMat b(a.rows(), a.cols());
  CVec v(sub);
  for (Eigen::Index col = 0; col < a.cols(); ++col) {
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t* idx = indices.data() + g * sub;
      for (std::size_t s = 0; s < sub; ++s) v[s] = a(idx[s], col);
      const CVec w = m * v;
      for (std::size_t s = 0; s < sub; ++s) b(idx[s], col) = w[s];
    }
  }
  return b;
}

CMat embed_apply_right_adjoint(const CMat& m, const std::vector<int>& targets,
                               int n_qubits, const CMat& a) {
  const auto indices = embedding_indices(targets, n_qubits);
  const std::size_t sub = std::size_t{1} << targets.size();
  const std::size_t groups = indices.size() / sub;
  const CMat mc = m.conjugate();
  CMat b(a.rows(), a.cols());
  CVec v(sub);
  for (Eigen::Index row = 0; row < a.rows(); ++row) {
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t* idx = indices.data() + g * sub;
      for (std::size_t s = 0; s < sub; ++s) v[s] = a(row, idx[s]);
      const CVec w = mc * v;
      for (std::size_t s = 0; s < sub; ++s) b(row, idx[s]) = w[s];
    }
  }
  return b;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& g) {
  const CMat u = g.local_matrix();
  DensityMatrix out;
  out.n_qubits = rho.n_qubits;
  out.data = embed_apply_right_adjoint(
      u, g.targets, rho.n_qubits,
      embed_apply_left(u, g.targets, rho.n_qubits, rho.data));
  return out;
}

}  // namespace qverify
