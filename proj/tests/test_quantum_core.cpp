#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qverify/channels.hpp"
#include "qverify/density_matrix.hpp"
#include "qverify/errors.hpp"
#include "qverify/gates.hpp"
#include "qverify/sampling.hpp"

using namespace qverify;
using qverify::testing::oracle_apply_channel;
using qverify::testing::oracle_apply_unitary;
using qverify::testing::random_density_state;

namespace {

CVec amps2(double a, double b) {
  CVec v(2);
  v << a, b;
  return v;
}

const std::vector<ChannelKind> kAllKinds = {
    ChannelKind::BitFlip, ChannelKind::PhaseFlip, ChannelKind::Depolarizing,
    ChannelKind::AmplitudeDamping};

}  // namespace

TEST_CASE("density_from_amplitudes basics") {
  const DensityMatrix basis = density_from_amplitudes(amps2(1, 0));
  CHECK(basis.data(0, 0).real() == doctest::Approx(1.0));
  CHECK(basis.data(1, 1).real() == doctest::Approx(0.0));

  const DensityMatrix plus =
      density_from_amplitudes(amps2(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(plus.data(i, j).real() == doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  const DensityMatrix tilted = density_from_amplitudes(amps2(0.6, 0.8));
  CHECK(tilted.data(0, 0).real() == doctest::Approx(0.36));
  CHECK(tilted.data(1, 1).real() == doctest::Approx(0.64));
  CHECK(tilted.data(0, 1).real() == doctest::Approx(0.48));
  CHECK(tilted.data(1, 0).real() == doctest::Approx(0.48));

  CHECK(tilted.trace_error() <= 1e-10);
  CHECK(tilted.hermiticity_error() <= 1e-10);
  CHECK(tilted.min_eigenvalue() >= -1e-9);
}

TEST_CASE("density_from_amplitudes rejects bad input") {
  CHECK_THROWS_AS(density_from_amplitudes(amps2(1, 1)), InvalidState);
  CVec three(3);
  three << 1, 0, 0;
  CHECK_THROWS_AS(density_from_amplitudes(three), InvalidState);
}

TEST_CASE("apply_unitary basis examples") {
  const DensityMatrix zero = density_from_amplitudes(amps2(1, 0));
  const DensityMatrix flipped = apply_unitary(zero, UnitaryGate::x(0));
  CHECK(flipped.data(0, 0).real() == doctest::Approx(0.0));
  CHECK(flipped.data(1, 1).real() == doctest::Approx(1.0));

  for (double angle : {0.0, 0.3, -2.5, 1.7}) {
    const DensityMatrix rotated = apply_unitary(zero, UnitaryGate::rz(angle, 0));
    CHECK(rotated.data(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rotated.data(1, 1).real() == doctest::Approx(0.0).epsilon(1e-12));
  }

  // |10> (qubit 0 = 1) maps to |11> under CNOT(0 -> 1)
  CVec ten = CVec::Zero(4);
  ten[2] = 1.0;
  const DensityMatrix rho10 = density_from_amplitudes(ten);
  const DensityMatrix rho11 = apply_unitary(rho10, UnitaryGate::cnot(0, 1));
  CHECK(rho11.data(3, 3).real() == doctest::Approx(1.0));
  CHECK(rho11.data(2, 2).real() == doctest::Approx(0.0));

  CHECK_THROWS_AS(apply_unitary(zero, UnitaryGate::x(1)), QubitIndexError);
}

TEST_CASE("apply_unitary matches full tensor expansion") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 3; ++n) {
    const DensityMatrix rho = random_density_state(rng, n);
    std::vector<UnitaryGate> gates = {UnitaryGate::rx(0.7, 0),
                                      UnitaryGate::h(n - 1),
                                      UnitaryGate::ry(-1.2, n / 2)};
    if (n >= 2) {
      gates.push_back(UnitaryGate::cnot(0, n - 1));
      gates.push_back(UnitaryGate::cnot(n - 1, 0));
    }
    for (const UnitaryGate& g : gates) {
      const DensityMatrix fast = apply_unitary(rho, g);
      const CMat slow = oracle_apply_unitary(rho.data, g, n);
      CHECK((fast.data - slow).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("unitary application preserves the spectrum") {
  std::mt19937_64 rng(5);
  Eigen::SelfAdjointEigenSolver<CMat> es;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const DensityMatrix rho = random_density_state(rng, n);
    UnitaryGate g = UnitaryGate::rx(uniform_double(rng) * 6 - 3,
                                    static_cast<int>(rng() % n));
    if (n >= 2 && trial % 3 == 0) {
      g = UnitaryGate::cnot(0, n - 1);
    }
    const DensityMatrix rotated = apply_unitary(rho, g);
    es.compute(rho.data, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd before = es.eigenvalues();
    es.compute(rotated.data, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd after = es.eigenvalues();
    CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("custom gates validate unitarity") {
  CMat not_unitary(2, 2);
  not_unitary << 1, 0, 0, 2;
  CHECK_THROWS_AS(UnitaryGate::custom(not_unitary, {0}), InvalidParameter);
  const UnitaryGate ok = UnitaryGate::custom(UnitaryGate::h(0).local_matrix(), {0});
  CHECK(ok.kind == GateKind::Custom);
}

TEST_CASE("make_channel kraus sets") {
  const KrausChannel identity = make_channel(ChannelKind::BitFlip, 0.0);
  REQUIRE(identity.operators.size() == 1);
  CHECK((identity.operators[0] - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);

  std::mt19937_64 rng(21);
  const DensityMatrix rho = random_density_state(rng, 1);
  const DensityMatrix flipped =
      apply_channel(rho, make_channel(ChannelKind::BitFlip, 1.0), 0);
  const DensityMatrix conjugated = apply_unitary(rho, UnitaryGate::x(0));
  CHECK((flipped.data - conjugated.data).cwiseAbs().maxCoeff() <= 1e-12);

  const DensityMatrix damped =
      apply_channel(rho, make_channel(ChannelKind::AmplitudeDamping, 1.0), 0);
  CHECK(damped.data(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(damped.data(1, 1)) <= 1e-12);
  CHECK(std::abs(damped.data(0, 1)) <= 1e-12);

  CHECK_THROWS_AS(make_channel(ChannelKind::BitFlip, -0.1), InvalidParameter);
  CHECK_THROWS_AS(make_channel(ChannelKind::Depolarizing, 1.1), InvalidParameter);
}

TEST_CASE("apply_channel pointwise examples") {
  const DensityMatrix zero = density_from_amplitudes(amps2(1, 0));
  const DensityMatrix mixed =
      apply_channel(zero, make_channel(ChannelKind::BitFlip, 0.3), 0);
  CHECK(mixed.data(0, 0).real() == doctest::Approx(0.7));
  CHECK(mixed.data(1, 1).real() == doctest::Approx(0.3));

  const DensityMatrix one = density_from_amplitudes(amps2(0, 1));
  const DensityMatrix decayed =
      apply_channel(one, make_channel(ChannelKind::AmplitudeDamping, 0.25), 0);
  CHECK(decayed.data(0, 0).real() == doctest::Approx(0.25));
  CHECK(decayed.data(1, 1).real() == doctest::Approx(0.75));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density_state(rng, 1);
    const DensityMatrix depol =
        apply_channel(rho, make_channel(ChannelKind::Depolarizing, 0.75), 0);
    CHECK((depol.data - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() <=
          1e-10);
  }

  CHECK_THROWS_AS(apply_channel(zero, make_channel(ChannelKind::BitFlip, 0.5), 3),
                  QubitIndexError);
}

TEST_CASE("channel physicality over random states") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 250; ++trial) {
    const DensityMatrix rho = random_density_state(rng, 1);
    for (ChannelKind kind : kAllKinds) {
      const double param = uniform_double(rng);
      const DensityMatrix out = apply_channel(rho, make_channel(kind, param), 0);
      CHECK(out.hermiticity_error() <= 1e-10);
      CHECK(out.trace_error() <= 1e-10);
      CHECK(out.min_eigenvalue() >= -1e-9);
    }
  }
}

TEST_CASE("channel limits: param 0 is the identity map") {
  std::mt19937_64 rng(7);
  const DensityMatrix rho = random_density_state(rng, 2);
  for (ChannelKind kind : kAllKinds) {
    const DensityMatrix out = apply_channel(rho, make_channel(kind, 0.0), 1);
    CHECK((out.data - rho.data).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("phase_flip(1) is Z conjugation") {
  std::mt19937_64 rng(9);
  const DensityMatrix rho = random_density_state(rng, 2);
  const DensityMatrix noisy =
      apply_channel(rho, make_channel(ChannelKind::PhaseFlip, 1.0), 0);
  const DensityMatrix conjugated = apply_unitary(rho, UnitaryGate::z(0));
  CHECK((noisy.data - conjugated.data).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("amplitude damping fixes the ground state") {
  const DensityMatrix ground = density_from_amplitudes(amps2(1, 0));
  for (double gamma : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const DensityMatrix out = apply_channel(
        ground, make_channel(ChannelKind::AmplitudeDamping, gamma), 0);
    CHECK((out.data - ground.data).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("apply_channel matches full tensor expansion") {
  std::mt19937_64 rng(77);
  for (int n = 1; n <= 3; ++n) {
    for (ChannelKind kind : kAllKinds) {
      const DensityMatrix rho = random_density_state(rng, n);
      const double param = uniform_double(rng);
      const int qubit = static_cast<int>(rng() % n);
      const KrausChannel ch = make_channel(kind, param);
      const DensityMatrix fast = apply_channel(rho, ch, qubit);
      const CMat slow = oracle_apply_channel(rho.data, ch, qubit, n);
      CHECK((fast.data - slow).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("custom channels validate completeness") {
  CMat half = 0.5 * CMat::Identity(2, 2);
  CHECK_THROWS_AS(custom_channel({half}), InvalidParameter);
  CHECK_NOTHROW(custom_channel({CMat::Identity(2, 2)}));
}

TEST_CASE("measurement_probs") {
  const DensityMatrix tilted =
      density_from_amplitudes(amps2(0.5, std::sqrt(0.75)));
  const std::vector<double> p = measurement_probs(tilted);
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK(p[1] == doctest::Approx(0.75));

  CVec bell = CVec::Zero(4);
  bell[0] = bell[3] = 1 / std::sqrt(2.0);
  const std::vector<double> pb = measurement_probs(density_from_amplitudes(bell));
  CHECK(pb[0] == doctest::Approx(0.5));
  CHECK(pb[1] == doctest::Approx(0.0));
  CHECK(pb[2] == doctest::Approx(0.0));
  CHECK(pb[3] == doctest::Approx(0.5));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<double> probs =
        measurement_probs(random_density_state(rng, 2));
    double total = 0.0;
    for (double v : probs) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }

  DensityMatrix corrupted = density_from_amplitudes(amps2(1, 0));
  corrupted.data(1, 1) = -1e-6;
  corrupted.data(0, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(measurement_probs(corrupted), NumericalError);
}

TEST_CASE("measurement of encoded amplitudes recovers |amps|^2") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    CVec amps(8);
    for (int i = 0; i < 8; ++i) {
      amps[i] = Cplx{uniform_double(rng) - 0.5, uniform_double(rng) - 0.5};
    }
    amps /= amps.norm();
    const std::vector<double> probs =
        measurement_probs(density_from_amplitudes(amps));
    for (int i = 0; i < 8; ++i) {
      CHECK(std::abs(probs[static_cast<std::size_t>(i)] - std::norm(amps[i])) <=
            1e-12);
    }
  }
}

TEST_CASE("z_expectation") {
  CHECK(z_expectation(density_from_amplitudes(amps2(1, 0)), 0) ==
        doctest::Approx(1.0));
  CHECK(z_expectation(density_from_amplitudes(amps2(0, 1)), 0) ==
        doctest::Approx(-1.0));
  DensityMatrix maximally_mixed;
  maximally_mixed.n_qubits = 1;
  maximally_mixed.data = 0.5 * CMat::Identity(2, 2);
  CHECK(z_expectation(maximally_mixed, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(z_expectation(maximally_mixed, 1), QubitIndexError);

  // qubit convention: qubit 0 is the most significant index bit
  CVec ten = CVec::Zero(4);
  ten[2] = 1.0;  // |10>
  const DensityMatrix rho = density_from_amplitudes(ten);
  CHECK(z_expectation(rho, 0) == doctest::Approx(-1.0));
  CHECK(z_expectation(rho, 1) == doctest::Approx(1.0));
}

TEST_CASE("sample_shots") {
  const std::vector<std::int64_t> point = sample_shots({1.0, 0.0}, 100, 42);
  CHECK(point[0] == 100);
  CHECK(point[1] == 0);

  const std::int64_t n = 1'000'000;
  const std::vector<std::int64_t> counts = sample_shots({0.5, 0.5}, n, 7);
  CHECK(counts[0] + counts[1] == n);
  const double sigma = std::sqrt(n * 0.25);
  CHECK(std::abs(static_cast<double>(counts[0]) - n / 2.0) <= 3 * sigma);

  const std::vector<std::int64_t> single = sample_shots({0.25, 0.75}, 1, 3);
  CHECK(single[0] + single[1] == 1);

  CHECK(sample_shots({0.3, 0.7}, 1000, 9) == sample_shots({0.3, 0.7}, 1000, 9));
  CHECK_THROWS_AS(sample_shots({1.0}, 0, 0), InvalidParameter);
  CHECK_THROWS_AS(sample_shots({0.4, 0.4}, 10, 0), InvalidParameter);
}
