#ifndef QVERIFY_CHECKER_HPP
#define QVERIFY_CHECKER_HPP

#include <optional>
#include <string>
#include <vector>

#include "qverify/dtmc.hpp"
#include "qverify/pctl.hpp"

namespace qverify {

struct CheckOptions {
  enum class Method { Auto, GaussSeidel, Direct } method = Method::Auto;
  double residual_tol = 1e-10;
  long max_iterations = 1'000'000;
  std::size_t direct_limit = 2000;  // Auto uses elimination up to this size
  bool per_state = false;
};

struct CheckResult {
  double probability_at_initial = 0.0;
  std::optional<std::vector<double>> per_state;
  struct SolverStats {
    long iterations = 0;
    double residual = 0.0;
    double check_seconds = 0.0;
    std::string method;
  } stats;
};

// Exact unbounded until / reachability. F phi is checked as true U phi.
// States with no guard-respecting path to the target are fixed to 0 by
// graph precomputation; the remaining unknowns solve x = Px + b either by
// Gauss-Seidel sweeps in state-index order or by dense elimination.
CheckResult check(const Dtmc& dtmc, const PctlProperty& prop,
                  const CheckOptions& options = {});

// States from which no path satisfying `left U right` exists: reverse
// reachability from right-states through left-states, complemented.
std::vector<int> prob0_set(const Dtmc& dtmc, const BoundPred& left,
                           const BoundPred& right);

}  // namespace qverify

#endif
