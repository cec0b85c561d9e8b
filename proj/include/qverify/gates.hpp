#ifndef QVERIFY_GATES_HPP
#define QVERIFY_GATES_HPP

#include <string>
#include <vector>

#include "qverify/density_matrix.hpp"

namespace qverify {

enum class GateKind { RX, RY, RZ, CNOT, X, Y, Z, H, Custom };

struct UnitaryGate {
  GateKind kind = GateKind::X;
  double angle = 0.0;          // rotation kinds only
  std::vector<int> targets;    // distinct, ordered; target 0 is the gate's MSB
  CMat matrix;                 // Custom only

  static UnitaryGate rx(double angle, int qubit);
  static UnitaryGate ry(double angle, int qubit);
  static UnitaryGate rz(double angle, int qubit);
  static UnitaryGate x(int qubit);
  static UnitaryGate y(int qubit);
  static UnitaryGate z(int qubit);
  static UnitaryGate h(int qubit);
  static UnitaryGate cnot(int control, int target);
  // Validates unitarity (||U^dag U - I||_max <= 1e-10) and distinct targets.
  static UnitaryGate custom(const CMat& matrix, std::vector<int> targets);

  // The 2^k x 2^k matrix acting on the target qubits.
  CMat local_matrix() const;
};

// Rho' = U rho U^dag with U embedded on the gate's targets, identity
// elsewhere. Never materializes the full-space operator.
DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& g);

// Shared embedding primitives, also used by the channel code.
// B = M~ A where M~ embeds M on `targets` of an n-qubit space.
CMat embed_apply_left(const CMat& m, const std::vector<int>& targets,
                      int n_qubits, const CMat& a);
// B = A M~^dag.
CMat embed_apply_right_adjoint(const CMat& m, const std::vector<int>& targets,
                               int n_qubits, const CMat& a);

}  // namespace qverify

#endif
