#include "qverify/environments.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "qverify/errors.hpp"

namespace qverify {

namespace {

// Merges slip outcomes that land on the same state, preserving the order of
// first occurrence so transition lists are deterministic.
std::vector<Transition> merge_outcomes(
    const std::vector<std::pair<FeatureState, double>>& outcomes) {
  std::vector<Transition> merged;
  for (const auto& [next, prob] : outcomes) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Transition& t) { return t.next == next; });
    if (it == merged.end()) {
      merged.push_back({next, prob});
    } else {
      it->prob += prob;
    }
  }
  return merged;
}

class FrozenLake final : public Mdp {
 public:
  static constexpr int kSink = 16;
  static constexpr int kGoal = 15;

  FeatureState initial_state() const override { return {{0}}; }

  const std::vector<std::string>& actions() const override {
    static const std::vector<std::string> names{"left", "down", "right", "up"};
    return names;
  }

  std::vector<Transition> transitions(const FeatureState& s,
                                      int action) const override {
    const int pos = s.values.at(0);
    if (pos == kSink) return {{s, 1.0}};
    if (is_hole(pos) || pos == kGoal) return {{{{kSink}}, 1.0}};
    // intended direction plus both perpendiculars, 1/3 each
    std::vector<std::pair<FeatureState, double>> outcomes;
    for (int slip : {(action + 3) % 4, action, (action + 1) % 4}) {
      outcomes.push_back({{{move(pos, slip)}}, 1.0 / 3.0});
    }
    return merge_outcomes(outcomes);
  }

  double reward(const FeatureState& s, int action) const override {
    const int pos = s.values.at(0);
    if (pos == kSink || pos == kGoal || is_hole(pos)) return 0.0;
    double r = 0.0;
    for (const Transition& t : transitions(s, action)) {
      if (t.next.values[0] == kGoal) r += t.prob;
    }
    return r;
  }

  std::vector<std::string> labels(const FeatureState& s) const override {
    const int pos = s.values.at(0);
    if (pos == kGoal) return {"Goal"};
    if (is_hole(pos)) return {"Hole"};
    return {};
  }

  const std::vector<FeatureRange>& feature_schema() const override {
    static const std::vector<FeatureRange> schema{{"pos", 0, 16}};
    return schema;
  }

  std::vector<std::string> label_names() const override {
    return {"Goal", "Hole"};
  }

 private:
  static bool is_hole(int pos) {
    return pos == 5 || pos == 7 || pos == 11 || pos == 12;
  }

  // 0 left, 1 down, 2 right, 3 up; off-grid moves stay in place
  static int move(int pos, int dir) {
    int row = pos / 4, col = pos % 4;
    switch (dir) {
      case 0: col = std::max(col - 1, 0); break;
      case 1: row = std::min(row + 1, 3); break;
      case 2: col = std::min(col + 1, 3); break;
      default: row = std::max(row - 1, 0); break;
    }
    return row * 4 + col;
  }
};

class Ski final : public Mdp {
 public:
  FeatureState initial_state() const override { return {{1}}; }

  const std::vector<std::string>& actions() const override {
    static const std::vector<std::string> names{"left", "right"};
    return names;
  }

  std::vector<Transition> transitions(const FeatureState& s,
                                      int action) const override {
    const int state = s.values.at(0);
    if (state == 0 || state == 6) return {{s, 1.0}};
    const bool advances = advancing_action(state) == action;
    const int next = advances ? (state + 1) % 16 : 0;
    return {{{{next}}, 1.0}};
  }

  double reward(const FeatureState& s, int action) const override {
    const int state = s.values.at(0);
    if (state == 0 || state == 6) return 0.0;
    return advancing_action(state) == action ? 1.0 : 0.0;
  }

  std::vector<std::string> labels(const FeatureState& s) const override {
    const int state = s.values.at(0);
    if (state == 6) return {"Goal"};
    if (state == 0) return {"Crash"};
    return {};
  }

  const std::vector<FeatureRange>& feature_schema() const override {
    static const std::vector<FeatureRange> schema{{"state", 0, 15}};
    return schema;
  }

  std::vector<std::string> label_names() const override {
    return {"Goal", "Crash"};
  }

 private:
  // odd states advance through left (0), even states through right (1)
  static int advancing_action(int state) { return state % 2 == 1 ? 0 : 1; }
};

class Freeway final : public Mdp {
 public:
  explicit Freeway(FreewayConfig config) : cfg_(std::move(config)) {
    if (cfg_.height < 2) throw ConfigError("freeway height must be >= 2");
    for (const FreewayLane& lane : cfg_.lanes) {
      if (lane.row < 0 || lane.row >= cfg_.height) {
        throw ConfigError("freeway lane row " + std::to_string(lane.row) +
                          " outside grid");
      }
      if (lane.width < 1) throw ConfigError("freeway lane width must be >= 1");
      if (lane.init_x < 0 || lane.init_x >= lane.width) {
        throw ConfigError("freeway lane init_x outside track");
      }
      if (lane.speed < 0) throw ConfigError("freeway lane speed must be >= 0");
    }
    schema_.push_back({"y", 0, cfg_.height});
    for (std::size_t i = 0; i < cfg_.lanes.size(); ++i) {
      schema_.push_back(
          {"car" + std::to_string(i), 0, cfg_.lanes[i].width - 1});
    }
  }

  FeatureState initial_state() const override {
    FeatureState s;
    s.values.push_back(cfg_.height - 1);
    for (const FreewayLane& lane : cfg_.lanes) s.values.push_back(lane.init_x);
    return s;
  }

  const std::vector<std::string>& actions() const override {
    static const std::vector<std::string> names{"up", "down", "noop"};
    return names;
  }

  std::vector<Transition> transitions(const FeatureState& s,
                                      int action) const override {
    const int y = s.values.at(0);
    if (y == 0 || y == cfg_.height) return {{s, 1.0}};

    const int dy = action == 0 ? -1 : action == 1 ? 1 : 0;
    const int ny = std::clamp(y + dy, 0, cfg_.height - 1);
    std::vector<int> cars(cfg_.lanes.size());
    bool hit = false;
    for (std::size_t i = 0; i < cfg_.lanes.size(); ++i) {
      const FreewayLane& lane = cfg_.lanes[i];
      cars[i] = (s.values.at(i + 1) + lane.speed) % lane.width;
      if (lane.row == ny && cars[i] == lane.width / 2) hit = true;
    }
    if (hit) return {{crash_state(), 1.0}};
    if (ny == 0) return {{goal_state(), 1.0}};
    FeatureState next;
    next.values.push_back(ny);
    next.values.insert(next.values.end(), cars.begin(), cars.end());
    return {{next, 1.0}};
  }

  double reward(const FeatureState& s, int action) const override {
    const int y = s.values.at(0);
    if (y == 0 || y == cfg_.height) return 0.0;
    const auto succ = transitions(s, action);
    return succ[0].next == goal_state() ? 1.0 : 0.0;
  }

  std::vector<std::string> labels(const FeatureState& s) const override {
    const int y = s.values.at(0);
    if (y == 0) return {"Goal"};
    if (y == cfg_.height) return {"Crash"};
    return {};
  }

  const std::vector<FeatureRange>& feature_schema() const override {
    return schema_;
  }

  std::vector<std::string> label_names() const override {
    return {"Goal", "Crash"};
  }

 private:
  FeatureState goal_state() const {
    FeatureState s;
    s.values.assign(cfg_.lanes.size() + 1, 0);
    return s;
  }
  FeatureState crash_state() const {
    FeatureState s;
    s.values.assign(cfg_.lanes.size() + 1, 0);
    s.values[0] = cfg_.height;
    return s;
  }

  FreewayConfig cfg_;
  std::vector<FeatureRange> schema_;
};

}  // namespace

std::unique_ptr<Mdp> frozen_lake() { return std::make_unique<FrozenLake>(); }

std::unique_ptr<Mdp> ski() { return std::make_unique<Ski>(); }

std::unique_ptr<Mdp> freeway(const FreewayConfig& config) {
  return std::make_unique<Freeway>(config);
}

FreewayConfig load_freeway_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open freeway config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("freeway config parse failure: " + std::string(e.what()));
  }
  FreewayConfig cfg;
  cfg.lanes.clear();
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "height") {
        cfg.height = value.get<int>();
      } else if (key == "lanes") {
        for (const auto& lj : value) {
          FreewayLane lane;
          for (const auto& [lk, lv] : lj.items()) {
            if (lk == "row") lane.row = lv.get<int>();
            else if (lk == "speed") lane.speed = lv.get<int>();
            else if (lk == "init_x") lane.init_x = lv.get<int>();
            else if (lk == "width") lane.width = lv.get<int>();
            else throw ConfigError("unknown freeway lane field '" + lk + "'");
          }
          cfg.lanes.push_back(lane);
        }
      } else {
        throw ConfigError("unknown freeway config field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("freeway config type error: " + std::string(e.what()));
  }
  return cfg;
}

std::unique_ptr<Mdp> make_environment(
    const std::string& name, const std::optional<std::string>& config_path) {
  if (name == "frozen_lake") return frozen_lake();
  if (name == "ski") return ski();
  if (name == "freeway") {
    return freeway(config_path ? load_freeway_config(*config_path)
                               : FreewayConfig{});
  }
  throw ConfigError("unknown environment '" + name + "'");
}

}  // namespace qverify
