#include "qverify/channels.hpp"

#include <cmath>

#include "qverify/errors.hpp"
#include "qverify/gates.hpp"

namespace qverify {

namespace {

void check_completeness(const std::vector<CMat>& ops) {
  if (ops.empty()) throw InvalidParameter("channel has no Kraus operators");
  CMat sum = CMat::Zero(2, 2);
  for (const CMat& k : ops) {
    if (k.rows() != 2 || k.cols() != 2) {
      throw InvalidParameter("Kraus operators must be 2x2");
    }
    sum += k.adjoint() * k;
  }
  const double err = (sum - CMat::Identity(2, 2)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw InvalidParameter("Kraus completeness violated (error " +
                           std::to_string(err) + ")");
  }
}

CMat scaled(double factor, const CMat& m) { return factor * m; }

}  // namespace

std::string channel_kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::BitFlip:
      return "bit_flip";
    case ChannelKind::PhaseFlip:
      return "phase_flip";
    case ChannelKind::Depolarizing:
      return "depolarizing";
    case ChannelKind::AmplitudeDamping:
      return "amplitude_damping";
    case ChannelKind::Custom:
      return "custom";
  }
  return "unknown";
}

ChannelKind channel_kind_from_name(const std::string& name) {
  if (name == "bit_flip") return ChannelKind::BitFlip;
  if (name == "phase_flip") return ChannelKind::PhaseFlip;
  if (name == "depolarizing") return ChannelKind::Depolarizing;
  if (name == "amplitude_damping") return ChannelKind::AmplitudeDamping;
  throw InvalidParameter("unknown channel kind '" + name + "'");
}

KrausChannel make_channel(ChannelKind kind, double param) {
  if (!(param >= 0.0 && param <= 1.0)) {
    throw InvalidParameter("channel parameter " + std::to_string(param) +
                           " outside [0,1]");
  }
  const CMat id = CMat::Identity(2, 2);
  KrausChannel ch;
  ch.kind = kind;
  ch.param = param;
  switch (kind) {
    case ChannelKind::BitFlip:
      ch.operators = {scaled(std::sqrt(1.0 - param), id),
                      scaled(std::sqrt(param), UnitaryGate::x(0).local_matrix())};
      break;
    case ChannelKind::PhaseFlip:
      ch.operators = {scaled(std::sqrt(1.0 - param), id),
                      scaled(std::sqrt(param), UnitaryGate::z(0).local_matrix())};
      break;
    case ChannelKind::Depolarizing:
      ch.operators = {scaled(std::sqrt(1.0 - param), id),
                      scaled(std::sqrt(param / 3.0), UnitaryGate::x(0).local_matrix()),
                      scaled(std::sqrt(param / 3.0), UnitaryGate::y(0).local_matrix()),
                      scaled(std::sqrt(param / 3.0), UnitaryGate::z(0).local_matrix())};
      break;
    case ChannelKind::AmplitudeDamping: {
      CMat e0(2, 2), e1(2, 2);
      e0 << 1, 0, 0, std::sqrt(1.0 - param);
      e1 << 0, std::sqrt(param), 0, 0;
      ch.operators = {e0, e1};
      break;
    }
    case ChannelKind::Custom:
      throw InvalidParameter("use custom_channel for custom Kraus sets");
  }
  // at param 0 or 1 some operators vanish exactly; drop them
  std::erase_if(ch.operators,
                [](const CMat& k) { return k.cwiseAbs().maxCoeff() == 0.0; });
  check_completeness(ch.operators);
  return ch;
}

KrausChannel custom_channel(std::vector<CMat> operators) {
  check_completeness(operators);
  KrausChannel ch;
  ch.kind = ChannelKind::Custom;
  ch.operators = std::move(operators);
  return ch;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            int qubit) {
  if (qubit < 0 || qubit >= rho.n_qubits) {
    throw QubitIndexError("qubit " + std::to_string(qubit) +
                          " out of range for " +
                          std::to_string(rho.n_qubits) + " qubits");
  }
  const std::vector<int> targets{qubit};
  DensityMatrix out;
  out.n_qubits = rho.n_qubits;
  out.data = CMat::Zero(rho.data.rows(), rho.data.cols());
  for (const CMat& k : ch.operators) {
    out.data += embed_apply_right_adjoint(
        k, targets, rho.n_qubits,
        embed_apply_left(k, targets, rho.n_qubits, rho.data));
  }
  return out;
}

NoiseSpec NoiseSpec::after_each_gate(ChannelKind kind, double param) {
  if (!(param >= 0.0 && param <= 1.0)) {
    throw InvalidParameter("noise parameter " + std::to_string(param) +
                           " outside [0,1]");
  }
  NoiseSpec spec;
  spec.enabled = true;
  spec.kind = kind;
  spec.param = param;
  return spec;
}

}  // namespace qverify
