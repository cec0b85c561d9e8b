#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "oracles.hpp"
#include "qverify/errors.hpp"
#include "qverify/policy_io.hpp"
#include "qverify/vqc_policy.hpp"

using namespace qverify;
using qverify::testing::oracle_policy_distribution;

namespace {

ParameterVector random_theta(std::mt19937_64& rng, const CircuitSpec& spec) {
  ParameterVector theta(static_cast<std::size_t>(parameter_count(spec)));
  for (double& t : theta) {
    t = (2.0 * uniform_double(rng) - 1.0) * std::numbers::pi;
  }
  return theta;
}

// central differences of log pi(action) in theta
std::vector<double> fd_log_prob_gradient(const CircuitSpec& spec,
                                         const ParameterVector& theta,
                                         const std::vector<std::int64_t>& features,
                                         int action, int n_actions,
                                         double h = 1e-5) {
  std::vector<double> grad(theta.size());
  ParameterVector t = theta;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    t[k] = theta[k] + h;
    const double plus = std::log(
        policy_distribution(spec, t, NoiseSpec::none(), features, n_actions)
            .probs[static_cast<std::size_t>(action)]);
    t[k] = theta[k] - h;
    const double minus = std::log(
        policy_distribution(spec, t, NoiseSpec::none(), features, n_actions)
            .probs[static_cast<std::size_t>(action)]);
    t[k] = theta[k];
    grad[k] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

const std::vector<ChannelKind> kAllKinds = {
    ChannelKind::BitFlip, ChannelKind::PhaseFlip, ChannelKind::Depolarizing,
    ChannelKind::AmplitudeDamping};

}  // namespace

TEST_CASE("amplitude_encode") {
  const DensityMatrix basis = amplitude_encode({1, 0, 0, 0}, 2, false);
  CHECK(basis.data(0, 0).real() == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) {
    CHECK(std::abs(basis.data(i, i)) <= 1e-15);
  }

  const DensityMatrix tilted = amplitude_encode({3, 4}, 1, false);
  CHECK(tilted.data(0, 0).real() == doctest::Approx(0.36));
  CHECK(tilted.data(1, 1).real() == doctest::Approx(0.64));
  CHECK(tilted.data(0, 1).real() == doctest::Approx(0.48));

  // all-zero features carry the bias as the only amplitude
  const DensityMatrix bias_only = amplitude_encode({0, 0, 0, 0}, 3, true);
  CHECK(bias_only.data(4, 4).real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(amplitude_encode({0, 0, 0, 0}, 3, false), EncodingError);
  CHECK_THROWS_AS(amplitude_encode({1, 2, 3, 4, 5}, 2, false), EncodingError);
}

TEST_CASE("amplitude_encode is scale invariant") {
  // holds for the pure-feature encoding; the bias amplitude intentionally
  // breaks it, so bias stays off here
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int64_t> features(5);
    for (auto& f : features) f = static_cast<std::int64_t>(rng() % 6);
    features[0] += 1;
    const DensityMatrix a = amplitude_encode(features, 3, false);
    for (std::int64_t c : {2, 7, 100}) {
      std::vector<std::int64_t> scaled = features;
      for (auto& f : scaled) f *= c;
      const DensityMatrix b = amplitude_encode(scaled, 3, false);
      CHECK((a.data - b.data).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("gate_sequence layout") {
  CircuitSpec fig2;
  fig2.n_qubits = 4;
  fig2.n_layers = 2;
  fig2.entangling_layers = {0};
  ParameterVector theta(24, 0.0);
  const auto gates = gate_sequence(fig2, theta);
  CHECK(gates.size() == 28);  // 24 rotations + 4 ring CNOTs

  CircuitSpec minimal;
  minimal.n_qubits = 1;
  minimal.n_layers = 1;
  minimal.entangling_layers = {};
  const auto single = gate_sequence(minimal, {0.1, 0.2, 0.3});
  REQUIRE(single.size() == 3);
  CHECK(single[0].kind == GateKind::RX);
  CHECK(single[1].kind == GateKind::RY);
  CHECK(single[2].kind == GateKind::RZ);

  CircuitSpec pair;
  pair.n_qubits = 2;
  pair.n_layers = 1;
  pair.entangling_layers = {0};
  const auto ring = gate_sequence(pair, {1, 2, 3, 4, 5, 6});
  REQUIRE(ring.size() == 8);
  // layer-major, qubit-major, rotation-minor parameter order
  CHECK(ring[0].kind == GateKind::RX);
  CHECK(ring[0].targets[0] == 0);
  CHECK(ring[0].angle == doctest::Approx(1));
  CHECK(ring[2].kind == GateKind::RZ);
  CHECK(ring[2].angle == doctest::Approx(3));
  CHECK(ring[3].kind == GateKind::RX);
  CHECK(ring[3].targets[0] == 1);
  CHECK(ring[3].angle == doctest::Approx(4));
  CHECK(ring[6].kind == GateKind::CNOT);
  CHECK(ring[6].targets == std::vector<int>{0, 1});
  CHECK(ring[7].targets == std::vector<int>{1, 0});

  CHECK_THROWS_AS(gate_sequence(pair, {1, 2, 3}), ParameterError);
}

TEST_CASE("policy_distribution at theta zero is uniform under z_softmax") {
  CircuitSpec spec;
  spec.n_qubits = 4;
  spec.n_layers = 2;
  spec.entangling_layers = {0};
  spec.append_bias = false;
  const ParameterVector theta(24, 0.0);
  const auto dist = policy_distribution(spec, theta, NoiseSpec::none(),
                                        {1, 0, 0, 0}, 4);
  for (double p : dist.probs) {
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("full amplitude damping forces the uniform distribution") {
  std::mt19937_64 rng(17);
  CircuitSpec spec;
  spec.n_qubits = 4;
  spec.n_layers = 2;
  spec.entangling_layers = {0};
  const NoiseSpec damp =
      NoiseSpec::after_each_gate(ChannelKind::AmplitudeDamping, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const ParameterVector theta = random_theta(rng, spec);
    std::vector<std::int64_t> features{static_cast<std::int64_t>(rng() % 4),
                                       static_cast<std::int64_t>(rng() % 4), 1};
    for (int n_actions : {2, 3, 4}) {
      const auto dist =
          policy_distribution(spec, theta, damp, features, n_actions);
      for (double p : dist.probs) {
        CHECK(std::abs(p - 1.0 / n_actions) <= 1e-10);
      }
    }
  }
}

TEST_CASE("policy_distribution matches the straight-line oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 24; ++trial) {
    CircuitSpec spec;
    spec.n_qubits = 2 + static_cast<int>(rng() % 3);
    spec.n_layers = 1 + static_cast<int>(rng() % 2);
    spec.entangling_layers.clear();
    if (rng() % 2) spec.entangling_layers.insert(0);
    if (spec.n_layers > 1 && rng() % 2) spec.entangling_layers.insert(1);
    spec.readout = rng() % 2 ? Readout::ZSoftmax : Readout::BasisMarginal;
    spec.softmax_beta = 0.5 + uniform_double(rng);
    spec.append_bias = rng() % 2;
    const int n_actions = 2 + static_cast<int>(rng() % (spec.readout == Readout::ZSoftmax
                                                            ? spec.n_qubits - 1
                                                            : 3));
    std::vector<std::int64_t> features{1 + static_cast<std::int64_t>(rng() % 3),
                                       static_cast<std::int64_t>(rng() % 3)};
    const ParameterVector theta = random_theta(rng, spec);

    NoiseSpec noise = NoiseSpec::none();
    if (trial % 3 == 1) {
      noise = NoiseSpec::after_each_gate(
          kAllKinds[rng() % kAllKinds.size()], uniform_double(rng));
    }
    const auto fast =
        policy_distribution(spec, theta, noise, features, n_actions);
    const auto slow =
        oracle_policy_distribution(spec, theta, noise, features, n_actions);
    for (int a = 0; a < n_actions; ++a) {
      CHECK(std::abs(fast.probs[static_cast<std::size_t>(a)] -
                     slow[static_cast<std::size_t>(a)]) <= 1e-10);
    }
  }
}

TEST_CASE("distributions normalize across random settings") {
  std::mt19937_64 rng(29);
  CircuitSpec spec;
  spec.n_qubits = 3;
  spec.n_layers = 2;
  spec.entangling_layers = {0};
  for (int trial = 0; trial < 1000; ++trial) {
    spec.readout = rng() % 2 ? Readout::ZSoftmax : Readout::BasisMarginal;
    const ParameterVector theta = random_theta(rng, spec);
    std::vector<std::int64_t> features{static_cast<std::int64_t>(rng() % 8),
                                       static_cast<std::int64_t>(rng() % 8)};
    NoiseSpec noise = NoiseSpec::none();
    if (trial % 2) {
      noise = NoiseSpec::after_each_gate(
          kAllKinds[rng() % kAllKinds.size()], uniform_double(rng));
    }
    const auto dist = policy_distribution(spec, theta, noise, features, 3);
    double total = 0.0;
    for (double p : dist.probs) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
  }
}

TEST_CASE("noise at parameter zero equals the noise-free policy") {
  std::mt19937_64 rng(37);
  CircuitSpec spec;
  spec.n_qubits = 3;
  spec.n_layers = 2;
  spec.entangling_layers = {0};
  const ParameterVector theta = random_theta(rng, spec);
  const std::vector<std::int64_t> features{2, 0, 1, 1};
  const auto clean =
      policy_distribution(spec, theta, NoiseSpec::none(), features, 2);
  for (ChannelKind kind : kAllKinds) {
    const auto zero = policy_distribution(
        spec, theta, NoiseSpec::after_each_gate(kind, 0.0), features, 2);
    for (std::size_t a = 0; a < clean.probs.size(); ++a) {
      CHECK(std::abs(zero.probs[a] - clean.probs[a]) <= 1e-12);
    }
  }
}

TEST_CASE("single-rotation gradient has the analytic value") {
  CircuitSpec spec;
  spec.n_qubits = 1;
  spec.n_layers = 1;
  spec.entangling_layers = {};
  spec.readout = Readout::BasisMarginal;
  spec.append_bias = false;
  const double a = 0.3;
  const ParameterVector theta{a, 0.0, 0.0};
  const std::vector<std::int64_t> features{1};

  // p0 = cos^2(a/2), p1 = sin^2(a/2)
  const auto g0 = log_prob_gradient(spec, theta, features, 0, 2);
  const auto g1 = log_prob_gradient(spec, theta, features, 1, 2);
  CHECK(g0[0] == doctest::Approx(-std::tan(a / 2)).epsilon(1e-9));
  CHECK(g1[0] == doctest::Approx(1.0 / std::tan(a / 2)).epsilon(1e-9));
  CHECK(std::abs(g0[1]) <= 1e-9);
  CHECK(std::abs(g0[2]) <= 1e-9);

  // d<Z>/da recovered from the two log gradients equals -sin(a)
  const double p0 = std::cos(a / 2) * std::cos(a / 2);
  const double p1 = 1.0 - p0;
  CHECK(p0 * g0[0] - p1 * g1[0] == doctest::Approx(-std::sin(a)).epsilon(1e-9));
}

TEST_CASE("score identity: expected log gradient vanishes") {
  std::mt19937_64 rng(41);
  for (Readout readout : {Readout::ZSoftmax, Readout::BasisMarginal}) {
    CircuitSpec spec;
    spec.n_qubits = 3;
    spec.n_layers = 2;
    spec.entangling_layers = {0};
    spec.readout = readout;
    for (int trial = 0; trial < 5; ++trial) {
      const ParameterVector theta = random_theta(rng, spec);
      const std::vector<std::int64_t> features{
          static_cast<std::int64_t>(rng() % 5),
          static_cast<std::int64_t>(rng() % 5), 1};
      const int n_actions = 2;
      const auto dist =
          policy_distribution(spec, theta, NoiseSpec::none(), features, n_actions);
      std::vector<double> expectation(theta.size(), 0.0);
      for (int action = 0; action < n_actions; ++action) {
        const auto g = log_prob_gradient(spec, theta, features, action, n_actions);
        for (std::size_t k = 0; k < g.size(); ++k) {
          expectation[k] += dist.probs[static_cast<std::size_t>(action)] * g[k];
        }
      }
      for (double v : expectation) {
        CHECK(std::abs(v) <= 1e-6);
      }
    }
  }
}

TEST_CASE("parameter shift agrees with finite differences") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    CircuitSpec spec;
    spec.n_qubits = 4;
    spec.n_layers = 2;
    spec.entangling_layers = {0};
    spec.readout = trial % 2 ? Readout::BasisMarginal : Readout::ZSoftmax;
    const ParameterVector theta = random_theta(rng, spec);
    const std::vector<std::int64_t> features{
        static_cast<std::int64_t>(rng() % 4),
        static_cast<std::int64_t>(rng() % 4),
        static_cast<std::int64_t>(rng() % 4), 1};
    const int n_actions = 4;
    const int action = static_cast<int>(rng() % n_actions);
    const auto shift = log_prob_gradient(spec, theta, features, action, n_actions);
    const auto fd = fd_log_prob_gradient(spec, theta, features, action, n_actions);
    for (std::size_t k = 0; k < shift.size(); ++k) {
      if (std::abs(shift[k]) < 1e-2) {
        CHECK(std::abs(shift[k] - fd[k]) <= 1e-7);
      } else {
        CHECK(std::abs(shift[k] - fd[k]) / std::abs(shift[k]) <= 1e-5);
      }
    }
  }
}

TEST_CASE("readout and action-count validation") {
  CircuitSpec spec;
  spec.n_qubits = 2;
  spec.n_layers = 1;
  spec.entangling_layers = {};
  spec.append_bias = false;
  const ParameterVector theta(6, 0.0);

  // z_softmax reads one qubit per action
  CHECK_THROWS_AS(
      policy_distribution(spec, theta, NoiseSpec::none(), {1, 0}, 3),
      ConfigError);

  spec.readout = Readout::BasisMarginal;
  CHECK_THROWS_AS(
      policy_distribution(spec, theta, NoiseSpec::none(), {1, 0}, 5),
      ConfigError);

  // all mass on the folded-away outcome |11> leaves nothing to renormalize
  CHECK_THROWS_AS(
      policy_distribution(spec, theta, NoiseSpec::none(), {0, 0, 0, 1}, 3),
      NumericalError);
}

TEST_CASE("gradient argument validation") {
  CircuitSpec spec;
  spec.n_qubits = 2;
  spec.n_layers = 1;
  const ParameterVector theta(6, 0.1);
  CHECK_THROWS_AS(log_prob_gradient(spec, theta, {1, 0}, 5, 2), ParameterError);
  CHECK_THROWS_AS(log_prob_gradient(spec, {0.1, 0.2}, {1, 0}, 0, 2),
                  ParameterError);
}

TEST_CASE("quantum policy file round trip") {
  QuantumPolicyFile file;
  file.spec.n_qubits = 3;
  file.spec.n_layers = 2;
  file.spec.entangling_layers = {0, 1};
  file.spec.readout = Readout::BasisMarginal;
  file.spec.softmax_beta = 1.5;
  file.spec.append_bias = true;
  file.feature_layout = "bits";
  file.theta.assign(18, 0.0);
  std::mt19937_64 rng(47);
  for (double& t : file.theta) t = uniform_double(rng) * 2 - 1;

  const std::string path = "test_quantum_policy.json";
  save_quantum_policy(path, file);
  const QuantumPolicyFile loaded = load_quantum_policy(path);
  CHECK(loaded.spec.n_qubits == file.spec.n_qubits);
  CHECK(loaded.spec.n_layers == file.spec.n_layers);
  CHECK(loaded.spec.entangling_layers == file.spec.entangling_layers);
  CHECK(loaded.spec.readout == file.spec.readout);
  CHECK(loaded.spec.softmax_beta == file.spec.softmax_beta);
  CHECK(loaded.spec.append_bias == file.spec.append_bias);
  CHECK(loaded.feature_layout == file.feature_layout);
  CHECK(loaded.theta == file.theta);

  // unknown fields are rejected
  {
    std::FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string text(1 << 16, '\0');
    text.resize(std::fread(text.data(), 1, text.size(), f));
    std::fclose(f);
    text.insert(text.find('{') + 1, "\"surprise\": 1,");
    std::FILE* g = std::fopen(path.c_str(), "w");
    std::fwrite(text.data(), 1, text.size(), g);
    std::fclose(g);
  }
  CHECK_THROWS_AS(load_quantum_policy(path), ConfigError);
  std::remove(path.c_str());
}
