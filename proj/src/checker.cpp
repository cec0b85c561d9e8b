#include "qverify/checker.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include "qverify/errors.hpp"

namespace qverify {

namespace {

struct PredSets {
  std::vector<char> guard;   // phi
  std::vector<char> target;  // psi
};

PredSets evaluate_predicates(const Dtmc& dtmc, const PctlProperty& prop) {
  const BoundPred left = BoundPred::bind(prop.left, dtmc.feature_names);
  const BoundPred right = BoundPred::bind(prop.right, dtmc.feature_names);
  const std::size_t n = dtmc.states.size();
  PredSets sets;
  sets.guard.resize(n);
  sets.target.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    sets.guard[s] = left.eval(dtmc.states[s], dtmc.labels[s]) ? 1 : 0;
    sets.target[s] = right.eval(dtmc.states[s], dtmc.labels[s]) ? 1 : 0;
  }
  return sets;
}

// states with some path to a target state that stays inside the guard set
std::vector<char> backward_reachable(const Dtmc& dtmc,
                                     const std::vector<char>& guard,
                                     const std::vector<char>& target) {
  const std::size_t n = dtmc.states.size();
  std::vector<std::vector<int>> predecessors(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& [dst, prob] : dtmc.rows[s]) {
      if (prob > 0.0) predecessors[static_cast<std::size_t>(dst)].push_back(
          static_cast<int>(s));
    }
  }
  std::vector<char> reach(n, 0);
  std::deque<int> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (target[s]) {
      reach[s] = 1;
      queue.push_back(static_cast<int>(s));
    }
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int p : predecessors[static_cast<std::size_t>(s)]) {
      const auto pi = static_cast<std::size_t>(p);
      if (!reach[pi] && guard[pi] && !target[pi]) {
        reach[pi] = 1;
        queue.push_back(p);
      }
    }
  }
  return reach;
}

}  // namespace

std::vector<int> prob0_set(const Dtmc& dtmc, const BoundPred& left,
                           const BoundPred& right) {
  const std::size_t n = dtmc.states.size();
  std::vector<char> guard(n), target(n);
  for (std::size_t s = 0; s < n; ++s) {
    guard[s] = left.eval(dtmc.states[s], dtmc.labels[s]) ? 1 : 0;
    target[s] = right.eval(dtmc.states[s], dtmc.labels[s]) ? 1 : 0;
  }
  const std::vector<char> reach = backward_reachable(dtmc, guard, target);
  std::vector<int> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!reach[s]) out.push_back(static_cast<int>(s));
  }
  return out;
}

CheckResult check(const Dtmc& dtmc, const PctlProperty& prop,
                  const CheckOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = dtmc.states.size();
  if (n == 0) throw ConfigError("empty DTMC");

  const PredSets sets = evaluate_predicates(dtmc, prop);
  const std::vector<char> reach =
      backward_reachable(dtmc, sets.guard, sets.target);

  // value per state: targets 1, unreachable-target states 0, rest unknown
  std::vector<double> value(n, 0.0);
  std::vector<int> unknown_of(n, -1);
  std::vector<int> unknowns;
  for (std::size_t s = 0; s < n; ++s) {
    if (sets.target[s]) {
      value[s] = 1.0;
    } else if (reach[s]) {
      unknown_of[s] = static_cast<int>(unknowns.size());
      unknowns.push_back(static_cast<int>(s));
    }
  }

  CheckResult result;
  const std::size_t m = unknowns.size();

  CheckOptions::Method method = options.method;
  if (method == CheckOptions::Method::Auto) {
    method = m <= options.direct_limit ? CheckOptions::Method::Direct
                                       : CheckOptions::Method::GaussSeidel;
  }
  if (method == CheckOptions::Method::Direct && m > options.direct_limit) {
    throw SolverError("direct elimination limited to " +
                          std::to_string(options.direct_limit) + " unknowns",
                      0.0);
  }

  if (m > 0 && method == CheckOptions::Method::Direct) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t u = 0; u < m; ++u) {
      const auto s = static_cast<std::size_t>(unknowns[u]);
      for (const auto& [dst, prob] : dtmc.rows[s]) {
        const auto d = static_cast<std::size_t>(dst);
        if (sets.target[d]) {
          b[static_cast<Eigen::Index>(u)] += prob;
        } else if (unknown_of[d] >= 0) {
          a(static_cast<Eigen::Index>(u),
            static_cast<Eigen::Index>(unknown_of[d])) -= prob;
        }
      }
    }
    const Eigen::VectorXd x = a.partialPivLu().solve(b);
    double residual = (a * x - b).cwiseAbs().maxCoeff();
    for (std::size_t u = 0; u < m; ++u) {
      value[static_cast<std::size_t>(unknowns[u])] =
          x[static_cast<Eigen::Index>(u)];
    }
    result.stats.iterations = 0;
    result.stats.residual = residual;
    result.stats.method = "direct";
  } else if (m > 0) {
    // Gauss-Seidel in state-index order; unknowns never have a full
    // self-loop (those are prob0 states), so 1 - P(s,s) > 0
    std::vector<double> x(m, 0.0);
    double residual = 0.0;
    long iteration = 0;
    for (; iteration < options.max_iterations; ++iteration) {
      for (std::size_t u = 0; u < m; ++u) {
        const auto s = static_cast<std::size_t>(unknowns[u]);
        double self = 0.0, acc = 0.0;
        for (const auto& [dst, prob] : dtmc.rows[s]) {
          const auto d = static_cast<std::size_t>(dst);
          if (d == s) {
            self += prob;
          } else if (sets.target[d]) {
            acc += prob;
          } else if (unknown_of[d] >= 0) {
            acc += prob * x[static_cast<std::size_t>(unknown_of[d])];
          }
        }
        x[u] = acc / (1.0 - self);
      }
      residual = 0.0;
      for (std::size_t u = 0; u < m; ++u) {
        const auto s = static_cast<std::size_t>(unknowns[u]);
        double acc = 0.0;
        for (const auto& [dst, prob] : dtmc.rows[s]) {
          const auto d = static_cast<std::size_t>(dst);
          if (sets.target[d]) {
            acc += prob;
          } else if (unknown_of[d] >= 0) {
            acc += prob * x[static_cast<std::size_t>(unknown_of[d])];
          }
        }
        residual = std::max(residual, std::abs(acc - x[u]));
      }
      if (residual <= options.residual_tol) {
        ++iteration;
        break;
      }
    }
    if (residual > options.residual_tol) {
      throw SolverError("Gauss-Seidel did not converge in " +
                            std::to_string(options.max_iterations) +
                            " iterations",
                        residual);
    }
    for (std::size_t u = 0; u < m; ++u) {
      value[static_cast<std::size_t>(unknowns[u])] = x[u];
    }
    result.stats.iterations = iteration;
    result.stats.residual = residual;
    result.stats.method = "gauss_seidel";
  } else {
    result.stats.method = "precomputation";
  }

  for (double& v : value) {
    if (v < -1e-9 || v > 1.0 + 1e-9) {
      throw NumericalError("probability " + std::to_string(v) +
                           " outside [0,1] slack");
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  result.probability_at_initial = value[static_cast<std::size_t>(dtmc.initial)];
  if (options.per_state) result.per_state = value;
  result.stats.check_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

}  // namespace qverify
