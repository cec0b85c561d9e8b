#ifndef QVERIFY_DENSITY_MATRIX_HPP
#define QVERIFY_DENSITY_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

namespace qverify {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Qubit ordering convention, used consistently everywhere: qubit 0 is the
// most significant bit of a basis index, so the bitstring of index x reads
// left to right as qubits 0..n-1.
inline int qubit_bit(std::size_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

// Negative probability dust below this magnitude is clamped to zero.
inline constexpr double kDiagClampTol = 1e-12;
// Anything more negative than this on the diagonal means the state is
// genuinely corrupted, not float dust.
inline constexpr double kDiagErrorTol = 1e-9;

struct DensityMatrix {
  int n_qubits = 0;
  CMat data;

  std::size_t dim() const { return static_cast<std::size_t>(data.rows()); }

  double trace_error() const;        // |Tr(data) - 1|
  double hermiticity_error() const;  // max_ij |data_ij - conj(data_ji)|
  double min_eigenvalue() const;     // eigensolve; test/debug paths only
};

// Outer product |psi><psi| of a unit-norm amplitude vector whose length is
// a power of two.
DensityMatrix density_from_amplitudes(const CVec& amps);

// Real diagonal of rho. Entries in [-1e-9, 0) are clamped to 0; entries
// below -1e-9 raise NumericalError, as does a trace off by more than 1e-10.
std::vector<double> measurement_probs(const DensityMatrix& rho);

// Tr(Z_qubit rho) = sum_x p_x * (+1 if bit(x, qubit) = 0 else -1).
double z_expectation(const DensityMatrix& rho, int qubit);

}  // namespace qverify

#endif
