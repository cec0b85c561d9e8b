#ifndef QVERIFY_SWEEP_HPP
#define QVERIFY_SWEEP_HPP

#include <string>
#include <vector>

#include "qverify/checker.hpp"
#include "qverify/mdp.hpp"
#include "qverify/policy_io.hpp"

namespace qverify {

// Noise-parameter sweep: one verification per grid point, each with its own
// noisy policy, DTMC and solve. Points are independent and may run
// concurrently; output rows stay in grid order.
struct SweepConfig {
  ChannelKind noise_kind = ChannelKind::BitFlip;
  std::vector<double> grid;  // sorted, within [0,1]
  int parallelism = 1;
  double prob_floor = 0.0;
  std::size_t state_ceiling = kDefaultStateCeiling;
  CheckOptions check;
};

struct SweepRow {
  double noise_param = 0.0;
  double probability = 0.0;
  std::size_t states = 0;
  std::size_t transitions = 0;
  double build_seconds = 0.0;
  double check_seconds = 0.0;
  std::string status = "ok";  // failure text otherwise
};

std::vector<SweepRow> run_sweep(const Mdp& mdp,
                                const QuantumPolicyFile& policy,
                                const PctlProperty& property,
                                const SweepConfig& config);

// CSV columns:
// noise_kind,noise_param,probability,states,transitions,build_seconds,check_seconds,status
void write_sweep_csv(const std::string& path, ChannelKind kind,
                     const std::vector<SweepRow>& rows);

}  // namespace qverify

#endif
