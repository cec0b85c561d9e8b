#include "qverify/density_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qverify/errors.hpp"

namespace qverify {

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace

double DensityMatrix::trace_error() const {
  return std::abs(data.trace() - Cplx{1.0, 0.0});
}

double DensityMatrix::hermiticity_error() const {
  return (data - data.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(data, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix density_from_amplitudes(const CVec& amps) {
  const std::size_t len = static_cast<std::size_t>(amps.size());
  if (!is_power_of_two(len)) {
    throw InvalidState("amplitude vector length " + std::to_string(len) +
                       " is not a power of two");
  }
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (!std::isfinite(amps[i].real()) || !std::isfinite(amps[i].imag())) {
      throw InvalidState("non-finite amplitude");
    }
  }
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw InvalidState("amplitude vector norm " + std::to_string(norm) +
                       " is not 1");
  }
  DensityMatrix rho;
  rho.n_qubits = log2_exact(len);
  rho.data = amps * amps.adjoint();
  return rho;
}

std::vector<double> measurement_probs(const DensityMatrix& rho) {
  const std::size_t dim = rho.dim();
  std::vector<double> probs(dim);
  double total = 0.0;
  for (std::size_t x = 0; x < dim; ++x) {
    double p = rho.data(x, x).real();
    if (p < -kDiagErrorTol) {
      throw NumericalError("diagonal entry " + std::to_string(p) +
                           " below -1e-9: state corrupted");
    }
    if (p < 0.0) p = 0.0;
    probs[x] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw NumericalError("measurement probabilities sum to " +
                         std::to_string(total));
  }
  return probs;
}

double z_expectation(const DensityMatrix& rho, int qubit) {
  if (qubit < 0 || qubit >= rho.n_qubits) {
    throw QubitIndexError("qubit " + std::to_string(qubit) +
                          " out of range for " +
                          std::to_string(rho.n_qubits) + " qubits");
  }
  const std::size_t dim = rho.dim();
  double value = 0.0;
  for (std::size_t x = 0; x < dim; ++x) {
    const double p = rho.data(x, x).real();
    value += qubit_bit(x, qubit, rho.n_qubits) == 0 ? p : -p;
  }
  return value;
}

}  // namespace qverify
