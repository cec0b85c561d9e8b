#include "qverify/dtmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "qverify/errors.hpp"

namespace qverify {

std::size_t Dtmc::transition_count() const {
  std::size_t total = 0;
  for (const auto& row : rows) total += row.size();
  return total;
}

double Dtmc::max_row_error() const {
  double worst = 0.0;
  for (const auto& row : rows) {
    double sum = 0.0;
    for (const auto& [dst, prob] : row) sum += prob;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

Dtmc build_induced_dtmc(const Mdp& mdp, const Policy& policy,
                        const std::optional<PctlProperty>& truncation,
                        double prob_floor, std::size_t state_ceiling) {
  if (static_cast<int>(mdp.actions().size()) != policy.n_actions()) {
    throw PolicyError("policy action count does not match environment");
  }
  if (prob_floor < 0.0) throw ConfigError("prob_floor must be >= 0");

  const auto started = std::chrono::steady_clock::now();

  std::optional<BoundPred> guard, target;
  if (truncation) {
    const auto names = feature_names(mdp);
    guard = BoundPred::bind(truncation->left, names);
    target = BoundPred::bind(truncation->right, names);
  }

  Dtmc out;
  out.feature_names = feature_names(mdp);
  std::unordered_map<FeatureState, int, FeatureStateHash> index;
  std::deque<int> frontier;

  const auto discover = [&](const FeatureState& s) {
    auto [it, inserted] = index.emplace(s, static_cast<int>(out.states.size()));
    if (inserted) {
      if (out.states.size() >= state_ceiling) {
        throw ExplosionError("state count exceeds ceiling " +
                             std::to_string(state_ceiling));
      }
      out.states.push_back(s);
      frontier.push_back(it->second);
    }
    return it->second;
  };

  discover(mdp.initial_state());
  const int n_actions = policy.n_actions();

  while (!frontier.empty()) {
    const int si = frontier.front();
    frontier.pop_front();
    const FeatureState s = out.states[static_cast<std::size_t>(si)];
    const std::vector<std::string> state_labels = mdp.labels(s);

    out.rows.resize(out.states.size());
    out.labels.resize(out.states.size());
    out.labels[static_cast<std::size_t>(si)] = state_labels;
    std::sort(out.labels[static_cast<std::size_t>(si)].begin(),
              out.labels[static_cast<std::size_t>(si)].end());

    // property-guided truncation: a decided state is absorbing, unexpanded
    if (truncation) {
      const bool decided = target->eval(s, state_labels) ||
                           !guard->eval(s, state_labels);
      if (decided) {
        out.rows[static_cast<std::size_t>(si)] = {{si, 1.0}};
        continue;
      }
    }

    ActionDistribution dist;
    try {
      dist = policy.distribution(s);
    } catch (const PolicyError&) {
      throw;
    } catch (const Error& e) {
      throw PolicyError(std::string("policy evaluation failed: ") + e.what());
    }
    if (static_cast<int>(dist.probs.size()) != n_actions) {
      throw PolicyError("policy returned wrong number of action probabilities");
    }
    validate_distribution(dist);

    // P(s,s') = sum_a pi(a|s) Tr(s,a,s'), successors merged in first-seen order
    std::vector<std::pair<FeatureState, double>> merged;
    for (int a = 0; a < n_actions; ++a) {
      const double pa = dist.probs[static_cast<std::size_t>(a)];
      if (!(pa > prob_floor)) continue;
      for (const Transition& t : mdp.transitions(s, a)) {
        if (t.prob <= 0.0) continue;
        const double mass = pa * t.prob;
        auto it = std::find_if(
            merged.begin(), merged.end(),
            [&](const auto& entry) { return entry.first == t.next; });
        if (it == merged.end()) {
          merged.push_back({t.next, mass});
        } else {
          it->second += mass;
        }
      }
    }

    double kept_mass = 0.0;
    std::vector<std::pair<FeatureState, double>> kept;
    for (auto& [next, mass] : merged) {
      if (mass > prob_floor) {
        kept.push_back({next, mass});
        kept_mass += mass;
      }
    }
    if (kept.empty() || kept_mass <= 0.0) {
      throw PolicyError("state row lost all probability mass under the floor");
    }

    auto& row = out.rows[static_cast<std::size_t>(si)];
    for (auto& [next, mass] : kept) {
      row.push_back({discover(next),
                     prob_floor > 0.0 ? mass / kept_mass : mass});
    }
  }

  out.rows.resize(out.states.size());
  out.labels.resize(out.states.size());
  out.stats.states = out.states.size();
  out.stats.transitions = out.transition_count();
  out.stats.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return out;
}

namespace {

std::string format_prob(double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", p);
  return buf;
}

}  // namespace

void export_dtmc(const Dtmc& dtmc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write DTMC file '" + path + "'");
  out << "dtmc v1\n";
  out << "states " << dtmc.states.size() << "\n";
  out << "initial " << dtmc.initial << "\n";
  for (std::size_t s = 0; s < dtmc.rows.size(); ++s) {
    for (const auto& [dst, prob] : dtmc.rows[s]) {
      out << "trans " << s << ' ' << dst << ' ' << format_prob(prob) << "\n";
    }
  }
  for (std::size_t s = 0; s < dtmc.labels.size(); ++s) {
    for (const std::string& name : dtmc.labels[s]) {
      out << "label " << s << ' ' << name << "\n";
    }
  }
  for (std::size_t s = 0; s < dtmc.states.size(); ++s) {
    out << "feature " << s;
    for (int v : dtmc.states[s].values) out << ' ' << v;
    out << "\n";
  }
  if (!out) throw ConfigError("write failure on '" + path + "'");
}

Dtmc import_dtmc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open DTMC file '" + path + "'", 0);

  Dtmc dtmc;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  long long n_states = -1;

  const auto fail = [&](const std::string& msg) -> void {
    throw ParseError(msg, line_no);
  };
  const auto check_state = [&](long long s) {
    if (s < 0 || s >= n_states) fail("state index out of range");
    return static_cast<std::size_t>(s);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;

    if (!have_header) {
      std::string version;
      if (word != "dtmc" || !(ls >> version) || version != "v1") {
        fail("expected 'dtmc v1' header");
      }
      have_header = true;
      continue;
    }
    if (word == "states") {
      if (!(ls >> n_states) || n_states < 1) fail("bad state count");
      dtmc.states.resize(static_cast<std::size_t>(n_states));
      dtmc.rows.resize(static_cast<std::size_t>(n_states));
      dtmc.labels.resize(static_cast<std::size_t>(n_states));
    } else if (word == "initial") {
      long long i;
      if (n_states < 0) fail("'initial' before 'states'");
      if (!(ls >> i)) fail("bad initial state");
      dtmc.initial = static_cast<int>(check_state(i));
    } else if (word == "trans") {
      long long src, dst;
      double prob;
      if (n_states < 0) fail("'trans' before 'states'");
      if (!(ls >> src >> dst >> prob)) fail("bad transition line");
      if (!(prob > 0.0 && prob <= 1.0 + 1e-9)) fail("transition probability outside (0,1]");
      dtmc.rows[check_state(src)].push_back(
          {static_cast<int>(check_state(dst)), prob});
    } else if (word == "label") {
      long long s;
      std::string name;
      if (n_states < 0) fail("'label' before 'states'");
      if (!(ls >> s >> name)) fail("bad label line");
      dtmc.labels[check_state(s)].push_back(name);
    } else if (word == "feature") {
      long long s;
      if (n_states < 0) fail("'feature' before 'states'");
      if (!(ls >> s)) fail("bad feature line");
      const std::size_t idx = check_state(s);
      int v;
      dtmc.states[idx].values.clear();
      while (ls >> v) dtmc.states[idx].values.push_back(v);
    } else {
      fail("unknown directive '" + word + "'");
    }
    std::string extra;
    if (word != "feature" && (ls >> extra)) fail("trailing content");
  }
  if (!have_header) throw ParseError("empty or headerless DTMC file", line_no);
  if (n_states < 0) throw ParseError("missing 'states' line", line_no);

  for (std::size_t s = 0; s < dtmc.rows.size(); ++s) {
    if (dtmc.rows[s].empty()) {
      throw ParseError("state " + std::to_string(s) + " has no transitions",
                       line_no);
    }
    double sum = 0.0;
    for (const auto& [dst, prob] : dtmc.rows[s]) sum += prob;
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ParseError("row " + std::to_string(s) + " sums to " +
                       std::to_string(sum), line_no);
    }
    std::sort(dtmc.labels[s].begin(), dtmc.labels[s].end());
  }
  dtmc.stats.states = dtmc.states.size();
  dtmc.stats.transitions = dtmc.transition_count();
  return dtmc;
}

}  // namespace qverify
