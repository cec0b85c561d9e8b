#ifndef QVERIFY_TRAINING_HPP
#define QVERIFY_TRAINING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qverify/mdp.hpp"
#include "qverify/policy.hpp"

namespace qverify {

enum class Baseline { None, MovingAverage };

struct TrainConfig {
  std::int64_t episodes = 10'000;
  double gamma = 0.99;
  double learning_rate = 0.01;
  std::int64_t max_steps = 200;
  std::uint64_t seed = 0;
  Baseline baseline = Baseline::None;
};

// Discounted returns G_t = r_t + gamma * G_{t+1}, computed backward.
std::vector<double> episode_returns(const std::vector<double>& rewards,
                                    double gamma);

struct TrainLog {
  std::vector<double> returns;  // undiscounted-from-start return G_0 per episode
};

// Vanilla REINFORCE: sample a trajectory from the policy and the MDP's true
// transition probabilities, accumulate sum_t grad log pi(a_t|s_t) *
// (G_t - baseline), take one ascent step per episode. Fully reproducible
// for a fixed config seed; updates the policy in place.
TrainLog reinforce_train(const Mdp& mdp, TrainablePolicy& policy,
                         const TrainConfig& cfg);

void write_return_log_csv(const TrainLog& log, const std::string& path);

}  // namespace qverify

#endif
