#ifndef QVERIFY_DTMC_HPP
#define QVERIFY_DTMC_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qverify/mdp.hpp"
#include "qverify/pctl.hpp"
#include "qverify/policy.hpp"

namespace qverify {

// Explicit sparse DTMC. Rows sum to 1 within 1e-9; absorbing states carry
// exactly one self-loop of probability 1. State indices are discovery
// order, initial is always index 0.
struct Dtmc {
  std::vector<FeatureState> states;
  int initial = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<std::vector<std::string>> labels;  // sorted per state
  std::vector<std::string> feature_names;        // in-memory only

  struct BuildStats {
    std::size_t states = 0;
    std::size_t transitions = 0;
    double build_seconds = 0.0;
  } stats;

  std::size_t transition_count() const;
  // max_s |sum_j P(s,j) - 1|
  double max_row_error() const;
};

// Induced DTMC of `policy` acting in `mdp`: BFS from the initial state,
// each expanded state's row is P(s,s') = sum_a pi(a|s) Tr(s,a,s') with
// duplicate successors merged. Actions with probability <= prob_floor do
// not participate; successors with marginal probability <= prob_floor are
// dropped and the row renormalized. When `truncation` is given, states
// where the property is already decided (target holds, or the until guard
// fails) become absorbing without expansion.
Dtmc build_induced_dtmc(const Mdp& mdp, const Policy& policy,
                        const std::optional<PctlProperty>& truncation = {},
                        double prob_floor = 0.0,
                        std::size_t state_ceiling = kDefaultStateCeiling);

// Line-oriented text format:
//   dtmc v1
//   states N
//   initial I
//   trans SRC DST PROB     (17 significant digits; round-trips exactly)
//   label STATE NAME
//   feature STATE f1 f2 ...
// '#' starts a comment. import(export(d)) reproduces structure,
// probabilities, labels and features exactly.
void export_dtmc(const Dtmc& dtmc, const std::string& path);
Dtmc import_dtmc(const std::string& path);

}  // namespace qverify

#endif
