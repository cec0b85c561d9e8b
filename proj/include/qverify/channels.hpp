#ifndef QVERIFY_CHANNELS_HPP
#define QVERIFY_CHANNELS_HPP

#include <string>
#include <vector>

#include "qverify/density_matrix.hpp"

namespace qverify {

enum class ChannelKind { BitFlip, PhaseFlip, Depolarizing, AmplitudeDamping, Custom };

std::string channel_kind_name(ChannelKind kind);
ChannelKind channel_kind_from_name(const std::string& name);

// Single-qubit Kraus channel. Operators satisfy the completeness relation
// ||sum_i K_i^dag K_i - I||_max <= 1e-10.
struct KrausChannel {
  ChannelKind kind = ChannelKind::Custom;
  double param = 0.0;  // probability p, or damping rate gamma
  std::vector<CMat> operators;
};

// bit_flip:          { sqrt(1-p) I, sqrt(p) X }
// phase_flip:        { sqrt(1-p) I, sqrt(p) Z }
// depolarizing:      { sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z }
// amplitude_damping: { diag(1, sqrt(1-g)), [[0, sqrt(g)], [0, 0]] }
KrausChannel make_channel(ChannelKind kind, double param);

// Arbitrary single-qubit Kraus set; validates completeness.
KrausChannel custom_channel(std::vector<CMat> operators);

// Rho' = sum_i K~_i rho K~_i^dag with each K_i embedded on `qubit`.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            int qubit);

// Per-gate noise injection setting: a channel kind and parameter applied
// independently to each target qubit after every gate, or disabled.
struct NoiseSpec {
  bool enabled = false;
  ChannelKind kind = ChannelKind::BitFlip;
  double param = 0.0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec after_each_gate(ChannelKind kind, double param);
};

}  // namespace qverify

#endif
