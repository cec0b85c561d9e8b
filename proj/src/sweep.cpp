#include "qverify/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <future>

#include "qverify/dtmc.hpp"
#include "qverify/errors.hpp"

namespace qverify {

namespace {

SweepRow run_point(const Mdp& mdp, const QuantumPolicyFile& policy,
                   const PctlProperty& property, const SweepConfig& config,
                   double param) {
  SweepRow row;
  row.noise_param = param;
  try {
    // param 0 still goes through the channel path; every channel at 0 is
    // the exact identity, so the row matches noise-free verification
    const NoiseSpec noise = NoiseSpec::after_each_gate(config.noise_kind, param);
    QuantumCircuitPolicy pol(policy.spec, policy.theta,
                             FeatureMap::parse(policy.feature_layout),
                             mdp.feature_schema(),
                             static_cast<int>(mdp.actions().size()), noise);
    const Dtmc dtmc = build_induced_dtmc(mdp, pol, {}, config.prob_floor,
                                         config.state_ceiling);
    const CheckResult result = check(dtmc, property, config.check);
    row.probability = result.probability_at_initial;
    row.states = dtmc.stats.states;
    row.transitions = dtmc.stats.transitions;
    row.build_seconds = dtmc.stats.build_seconds;
    row.check_seconds = result.stats.check_seconds;
  } catch (const Error& e) {
    row.status = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Mdp& mdp,
                                const QuantumPolicyFile& policy,
                                const PctlProperty& property,
                                const SweepConfig& config) {
  for (double p : config.grid) {
    if (p < 0.0 || p > 1.0) {
      throw ConfigError("sweep grid value " + std::to_string(p) +
                        " outside [0,1]");
    }
  }
  const int jobs = std::max(config.parallelism, 1);
  std::vector<SweepRow> rows(config.grid.size());
  for (std::size_t base = 0; base < config.grid.size();
       base += static_cast<std::size_t>(jobs)) {
    const std::size_t end =
        std::min(base + static_cast<std::size_t>(jobs), config.grid.size());
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = base; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        return run_point(mdp, policy, property, config, config.grid[i]);
      }));
    }
    for (std::size_t i = base; i < end; ++i) {
      rows[i] = batch[i - base].get();
    }
  }
  return rows;
}

void write_sweep_csv(const std::string& path, ChannelKind kind,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write sweep CSV '" + path + "'");
  out << "noise_kind,noise_param,probability,states,transitions,"
         "build_seconds,check_seconds,status\n";
  char buf[64];
  for (const SweepRow& row : rows) {
    out << channel_kind_name(kind) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.noise_param);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.probability);
    out << buf << ',' << row.states << ',' << row.transitions << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", row.build_seconds);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", row.check_seconds);
    out << buf << ',' << row.status << '\n';
  }
  if (!out) throw ConfigError("write failure on '" + path + "'");
}

}  // namespace qverify
