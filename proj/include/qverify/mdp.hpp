#ifndef QVERIFY_MDP_HPP
#define QVERIFY_MDP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qverify {

// Integer feature vector matching the owning MDP's feature schema.
struct FeatureState {
  std::vector<int> values;

  bool operator==(const FeatureState& other) const {
    return values == other.values;
  }
};

struct FeatureStateHash {
  std::size_t operator()(const FeatureState& s) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int v : s.values) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

struct FeatureRange {
  std::string name;
  int min = 0;
  int max = 0;
};

struct Transition {
  FeatureState next;
  double prob = 0.0;
};

// Explicit-state environment model. All actions are available in every
// state and per-(s,a) successor probabilities sum to 1. Implementations are
// immutable after construction; transitions is pure.
class Mdp {
 public:
  virtual ~Mdp() = default;

  virtual FeatureState initial_state() const = 0;
  virtual const std::vector<std::string>& actions() const = 0;
  virtual std::vector<Transition> transitions(const FeatureState& s,
                                              int action) const = 0;
  virtual double reward(const FeatureState& s, int action) const = 0;
  virtual std::vector<std::string> labels(const FeatureState& s) const = 0;
  virtual const std::vector<FeatureRange>& feature_schema() const = 0;
  virtual std::vector<std::string> label_names() const = 0;
};

inline constexpr std::size_t kDefaultStateCeiling = 10'000'000;

// BFS closure from the initial state over all actions, in first-discovery
// order with actions iterated in declared order.
std::vector<FeatureState> enumerate_reachable(
    const Mdp& mdp, std::size_t state_ceiling = kDefaultStateCeiling);

// True when every action self-loops with probability 1.
bool is_absorbing(const Mdp& mdp, const FeatureState& s);

std::vector<std::string> feature_names(const Mdp& mdp);

}  // namespace qverify

#endif
