#include "qverify/training.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "qverify/errors.hpp"
#include "qverify/sampling.hpp"

namespace qverify {

std::vector<double> episode_returns(const std::vector<double>& rewards,
                                    double gamma) {
  std::vector<double> returns(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    returns[i] = acc;
  }
  return returns;
}

namespace {

struct Step {
  FeatureState state;
  int action = 0;
  double reward = 0.0;
};

}  // namespace

TrainLog reinforce_train(const Mdp& mdp, TrainablePolicy& policy,
                         const TrainConfig& cfg) {
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0) {
    throw ConfigError("gamma must be in [0,1]");
  }
  if (cfg.episodes < 0 || cfg.max_steps < 1) {
    throw ConfigError("episodes must be >= 0 and max_steps >= 1");
  }
  if (static_cast<int>(mdp.actions().size()) != policy.n_actions()) {
    throw ConfigError("policy action count does not match environment");
  }

  std::mt19937_64 rng(cfg.seed);
  TrainLog log;
  log.returns.reserve(static_cast<std::size_t>(cfg.episodes));
  double return_average = 0.0;
  bool have_average = false;

  for (std::int64_t episode = 0; episode < cfg.episodes; ++episode) {
    // the policy changes every episode, so distributions cache per episode
    std::unordered_map<FeatureState, ActionDistribution, FeatureStateHash>
        dist_cache;
    std::vector<Step> trajectory;
    std::vector<double> rewards;
    FeatureState s = mdp.initial_state();
    for (std::int64_t t = 0; t < cfg.max_steps && !is_absorbing(mdp, s); ++t) {
      auto it = dist_cache.find(s);
      if (it == dist_cache.end()) {
        it = dist_cache.emplace(s, policy.distribution(s)).first;
      }
      const int action = sample_index(rng, it->second.probs);
      const double r = mdp.reward(s, action);
      FeatureState next;
      {
        const auto successors = mdp.transitions(s, action);
        std::vector<double> probs;
        probs.reserve(successors.size());
        for (const Transition& tr : successors) probs.push_back(tr.prob);
        next = successors[static_cast<std::size_t>(sample_index(rng, probs))]
                   .next;
      }
      trajectory.push_back({s, action, r});
      rewards.push_back(r);
      s = next;
    }

    const std::vector<double> returns = episode_returns(rewards, cfg.gamma);
    const double episode_return = returns.empty() ? 0.0 : returns[0];
    const double baseline =
        (cfg.baseline == Baseline::MovingAverage && have_average)
            ? return_average
            : 0.0;

    std::vector<double> params = policy.parameters();
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
      const std::vector<double> g =
          policy.grad_log_prob(trajectory[t].state, trajectory[t].action);
      const double weight = returns[t] - baseline;
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += weight * g[k];
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      params[k] += cfg.learning_rate * grad[k];
      if (!std::isfinite(params[k])) {
        throw TrainingDiverged("non-finite parameter at episode " +
                               std::to_string(episode));
      }
    }
    policy.set_parameters(params);

    if (cfg.baseline == Baseline::MovingAverage) {
      if (!have_average) {
        return_average = episode_return;
        have_average = true;
      } else {
        return_average += 0.05 * (episode_return - return_average);
      }
    }
    log.returns.push_back(episode_return);
  }
  return log;
}

void write_return_log_csv(const TrainLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write return log '" + path + "'");
  out << "episode,return\n";
  char buf[64];
  for (std::size_t i = 0; i < log.returns.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", log.returns[i]);
    out << i << ',' << buf << '\n';
  }
}

}  // namespace qverify
