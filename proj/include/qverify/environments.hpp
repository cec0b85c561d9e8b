#ifndef QVERIFY_ENVIRONMENTS_HPP
#define QVERIFY_ENVIRONMENTS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qverify/mdp.hpp"

namespace qverify {

// 4x4 slippery grid: feature pos in 0..16 where 16 is the shared absorbing
// sink. Start 0, holes {5,7,11,12}, goal 15. Actions left,down,right,up;
// the intended direction and both perpendiculars each occur with
// probability 1/3, off-grid moves stay in place with the mass merged.
std::unique_ptr<Mdp> frozen_lake();

// Parity chain: feature state in 0..15, start 1, actions left,right. Odd
// states advance through left, even states (except 0 and 6) through right;
// the wrong action crashes to 0. State 6 is the goal; 0 and 6 absorb.
std::unique_ptr<Mdp> ski();

struct FreewayLane {
  int row = 0;
  int speed = 1;
  int init_x = 0;
  int width = 4;
};

// Chicken crossing abstraction: the chicken sits in the middle column of
// each lane's cyclic track; cars advance deterministically by speed modulo
// the lane width. Reaching row 0 is the goal, a car on the chicken's cell
// is a crash; both collapse to one canonical absorbing state (y = 0 for
// goal, y = height for crash).
struct FreewayConfig {
  int height = 4;
  std::vector<FreewayLane> lanes = {{1, 1, 0, 4}, {2, 1, 2, 5}};
};

std::unique_ptr<Mdp> freeway(const FreewayConfig& config);

// Parses {"height": H, "lanes": [{"row": r, "speed": v, "init_x": x,
// "width": w}, ...]}.
FreewayConfig load_freeway_config(const std::string& path);

// Environment registry used by the CLI: "frozen_lake", "ski", "freeway".
std::unique_ptr<Mdp> make_environment(const std::string& name,
                                      const std::optional<std::string>& config_path);

}  // namespace qverify

#endif
