#include "qverify/mdp.hpp"

#include <deque>
#include <unordered_map>

#include "qverify/errors.hpp"

namespace qverify {

std::vector<FeatureState> enumerate_reachable(const Mdp& mdp,
                                              std::size_t state_ceiling) {
  std::vector<FeatureState> order;
  std::unordered_map<FeatureState, int, FeatureStateHash> seen;
  std::deque<int> frontier;

  const auto discover = [&](const FeatureState& s) {
    auto [it, inserted] = seen.emplace(s, static_cast<int>(order.size()));
    if (inserted) {
      if (order.size() >= state_ceiling) {
        throw ExplosionError("reachable state count exceeds ceiling " +
                             std::to_string(state_ceiling));
      }
      order.push_back(s);
      frontier.push_back(it->second);
    }
  };

  discover(mdp.initial_state());
  const int n_actions = static_cast<int>(mdp.actions().size());
  while (!frontier.empty()) {
    const FeatureState s = order[static_cast<std::size_t>(frontier.front())];
    frontier.pop_front();
    for (int a = 0; a < n_actions; ++a) {
      for (const Transition& t : mdp.transitions(s, a)) {
        if (t.prob > 0.0) discover(t.next);
      }
    }
  }
  return order;
}

bool is_absorbing(const Mdp& mdp, const FeatureState& s) {
  const int n_actions = static_cast<int>(mdp.actions().size());
  for (int a = 0; a < n_actions; ++a) {
    const auto successors = mdp.transitions(s, a);
    if (successors.size() != 1 || !(successors[0].next == s) ||
        successors[0].prob != 1.0) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> feature_names(const Mdp& mdp) {
  std::vector<std::string> names;
  for (const FeatureRange& f : mdp.feature_schema()) names.push_back(f.name);
  return names;
}

}  // namespace qverify
