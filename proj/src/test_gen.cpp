#include "pltgen/test_gen.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>

#include "pltgen/errors.hpp"

namespace pltgen {

namespace {

constexpr std::size_t kMaxFreeVariables = 20;

// The admissible static assignments the generator may choose from, in a
// canonical order (ascending bitmask over sorted variable names).
struct Universe {
  std::vector<std::string> vars;
  std::vector<std::map<std::string, bool>> assignments;
};

Universe build_universe(const StateMachine& sm, const AssignmentSpec& spec) {
  Universe u;
  if (const auto* fixed = std::get_if<std::map<std::string, bool>>(&spec)) {
    if (sm.admissible()) {
      BoolExpr folded = substitute(*sm.admissible(), *fixed);
      if (is_const(folded, false))
        throw ValidationError("fixed assignment violates the admissibility condition");
      if (!is_const(folded, true))
        throw ValidationError("fixed assignment leaves the admissibility condition undecided");
    }
    u.assignments.push_back(*fixed);
    return u;
  }

  for (const auto& v : sm.variables()) u.vars.push_back(v.name);
  std::sort(u.vars.begin(), u.vars.end());
  if (u.vars.size() > kMaxFreeVariables)
    throw BoundExceededError(u.vars.size(), kMaxFreeVariables);

  std::uint64_t total = std::uint64_t{1} << u.vars.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::map<std::string, bool> a;
    for (std::size_t j = 0; j < u.vars.size(); ++j)
      a[u.vars[j]] = (mask >> j & 1) != 0;
    if (sm.admissible() && !eval(*sm.admissible(), a)) continue;
    u.assignments.push_back(std::move(a));
  }
  if (u.assignments.empty())
    throw ValidationError("no admissible assignment exists for this machine");
  return u;
}

using Compat = std::vector<std::uint32_t>;  // sorted universe indices

// Walkable arcs: triggered transitions only, ordered by id for tie-breaking.
struct Arcs {
  std::vector<int> order;                    // transition indices sorted by id
  std::vector<std::vector<int>> out;         // per state, positions into order
  std::vector<std::vector<char>> sat;        // per order position, per universe index
};

Arcs build_arcs(const StateMachine& sm, const Universe& u) {
  Arcs a;
  for (int i = 0; i < static_cast<int>(sm.transitions().size()); ++i)
    if (sm.transitions()[i].trigger) a.order.push_back(i);
  std::sort(a.order.begin(), a.order.end(), [&](int x, int y) {
    return sm.transitions()[x].id < sm.transitions()[y].id;
  });
  a.out.resize(sm.states().size());
  a.sat.resize(a.order.size());
  for (std::size_t p = 0; p < a.order.size(); ++p) {
    const auto& t = sm.transitions()[a.order[p]];
    a.out[t.source].push_back(static_cast<int>(p));
    a.sat[p].resize(u.assignments.size(), 1);
    if (t.guard)
      for (std::size_t i = 0; i < u.assignments.size(); ++i)
        a.sat[p][i] = eval(*t.guard, u.assignments[i]) ? 1 : 0;
  }
  return a;
}

Compat full_compat(const Universe& u) {
  Compat c(u.assignments.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<std::uint32_t>(i);
  return c;
}

Compat narrow(const Compat& c, const std::vector<char>& sat) {
  Compat out;
  for (auto i : c)
    if (sat[i]) out.push_back(i);
  return out;
}

// Which coverage identities are reachable at all: a target is coverable iff
// some admissible assignment both enables one of its arcs and makes that
// arc's source reachable from the initial state.
std::set<std::string> coverable_targets(const StateMachine& sm, const Universe& u,
                                        const Arcs& arcs) {
  std::set<std::string> coverable;
  for (std::size_t i = 0; i < u.assignments.size(); ++i) {
    std::vector<char> reach(sm.states().size(), 0);
    std::deque<int> queue{sm.initial()};
    reach[sm.initial()] = 1;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      for (int p : arcs.out[s]) {
        if (!arcs.sat[p][i]) continue;
        int tgt = sm.transitions()[arcs.order[p]].target;
        if (!reach[tgt]) {
          reach[tgt] = 1;
          queue.push_back(tgt);
        }
      }
    }
    for (std::size_t p = 0; p < arcs.order.size(); ++p) {
      const auto& t = sm.transitions()[arcs.order[p]];
      if (arcs.sat[p][i] && reach[t.source]) coverable.insert(t.origin);
    }
  }
  return coverable;
}

struct Walk {
  int state;
  Compat compat;
  std::vector<int> arc_positions;  // into arcs.order
};

// Shortest route from the walk's current node to any arc whose coverage
// identity is still uncovered; ties broken by BFS order and transition id.
// Returns the arc positions to traverse (ending with the covering arc), or
// empty if nothing uncovered is reachable.
std::vector<int> route_to_nearest(const StateMachine& sm, const Arcs& arcs,
                                  const Walk& walk,
                                  const std::set<std::string>& uncovered) {
  struct Node {
    int state;
    int compat_id;
  };
  std::vector<Compat> compats{walk.compat};
  std::map<Compat, int> compat_ids{{walk.compat, 0}};
  std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int>> parent;
  std::deque<Node> queue{{walk.state, 0}};
  std::set<std::pair<int, int>> seen{{walk.state, 0}};

  auto rebuild = [&](std::pair<int, int> node, int last_arc) {
    std::vector<int> path{last_arc};
    while (parent.count(node)) {
      auto [prev, arc] = parent[node];
      path.push_back(arc);
      node = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  while (!queue.empty()) {
    Node n = queue.front();
    queue.pop_front();
    for (int p : arcs.out[n.state]) {
      Compat next = narrow(compats[n.compat_id], arcs.sat[p]);
      if (next.empty()) continue;
      const auto& t = sm.transitions()[arcs.order[p]];
      if (uncovered.count(t.origin))
        return rebuild({n.state, n.compat_id}, p);
      auto [it, inserted] = compat_ids.try_emplace(next, static_cast<int>(compats.size()));
      if (inserted) compats.push_back(next);
      std::pair<int, int> key{t.target, it->second};
      if (seen.insert(key).second) {
        parent[key] = {{n.state, n.compat_id}, p};
        queue.push_back({key.first, key.second});
      }
    }
  }
  return {};
}

void apply_route(const StateMachine& sm, const Arcs& arcs, Walk& walk,
                 const std::vector<int>& route, std::set<std::string>& uncovered) {
  for (int p : route) {
    const auto& t = sm.transitions()[arcs.order[p]];
    walk.compat = narrow(walk.compat, arcs.sat[p]);
    walk.state = t.target;
    walk.arc_positions.push_back(p);
    uncovered.erase(t.origin);
  }
}

// Fewest selected variables first, then lexicographic over the sorted list
// of selected names; mirrors the configuration completion preference.
std::size_t witness_index(const Universe& u, const Compat& compat) {
  auto selected_names = [&](std::uint32_t i) {
    std::vector<std::string> names;
    for (const auto& [k, v] : u.assignments[i])
      if (v) names.push_back(k);
    return names;  // map iteration is already sorted
  };
  std::uint32_t best = compat.front();
  auto best_names = selected_names(best);
  for (auto i : compat) {
    auto names = selected_names(i);
    if (std::pair(names.size(), names) < std::pair(best_names.size(), best_names)) {
      best = i;
      best_names = std::move(names);
    }
  }
  return best;
}

TestCase finalize_case(const StateMachine& sm, const Universe& u, const Arcs& arcs,
                       const Walk& walk, int case_number, bool free_mode) {
  TestCase tc;
  char buf[16];
  std::snprintf(buf, sizeof buf, "case-%03d", case_number);
  tc.id = buf;
  for (int p : walk.arc_positions)
    tc.events.push_back(*sm.transitions()[arcs.order[p]].trigger);

  if (!free_mode) {
    tc.prolog = u.assignments[0];
  } else {
    // Bind every variable the walk pinned down (constant over the
    // remaining compatible assignments).
    for (const auto& v : u.vars) {
      bool first = u.assignments[walk.compat.front()].at(v);
      bool constant = true;
      for (auto i : walk.compat)
        if (u.assignments[i].at(v) != first) {
          constant = false;
          break;
        }
      if (constant) tc.prolog[v] = first;
    }
  }

  try {
    tc.expected_trace = replay(sm, tc.events, tc.prolog);
  } catch (const ReplayError&) {
    if (!free_mode) throw;
    // Partial prolog was not enough to decide the walk deterministically;
    // fall back to one concrete witness assignment.
    tc.prolog = u.assignments[witness_index(u, walk.compat)];
    tc.expected_trace = replay(sm, tc.events, tc.prolog);
  }
  return tc;
}

std::vector<TestCase> run_greedy(const StateMachine& sm, const Universe& u,
                                 const Arcs& arcs, std::set<std::string> uncovered,
                                 bool free_mode) {
  std::vector<TestCase> cases;
  while (!uncovered.empty()) {
    Walk walk{sm.initial(), full_compat(u), {}};
    while (true) {
      auto route = route_to_nearest(sm, arcs, walk, uncovered);
      if (route.empty()) break;
      apply_route(sm, arcs, walk, route, uncovered);
    }
    cases.push_back(finalize_case(sm, u, arcs, walk,
                                  static_cast<int>(cases.size()) + 1, free_mode));
  }
  return cases;
}

// --- directed-postman single-walk attempt ------------------------------

// Arc positions enabled under one fixed assignment.
struct Specialized {
  std::vector<int> positions;                 // into arcs.order
  std::vector<std::vector<int>> out;          // per state
};

Specialized specialize(const StateMachine& sm, const Arcs& arcs, std::size_t ai) {
  Specialized sp;
  sp.out.resize(sm.states().size());
  for (std::size_t p = 0; p < arcs.order.size(); ++p) {
    if (!arcs.sat[p][ai]) continue;
    sp.positions.push_back(static_cast<int>(p));
    sp.out[sm.transitions()[arcs.order[p]].source].push_back(static_cast<int>(p));
  }
  return sp;
}

// BFS shortest arc-position paths from `from` to every state.
std::vector<std::vector<int>> shortest_paths(const StateMachine& sm, const Arcs& arcs,
                                             const Specialized& sp, int from) {
  std::vector<std::vector<int>> path(sm.states().size());
  std::vector<char> seen(sm.states().size(), 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int p : sp.out[s]) {
      int tgt = sm.transitions()[arcs.order[p]].target;
      if (seen[tgt]) continue;
      seen[tgt] = 1;
      path[tgt] = path[s];
      path[tgt].push_back(p);
      queue.push_back(tgt);
    }
  }
  return path;
}

// Attempts one covering walk from the initial state under assignment `ai`:
// pick one representative arc per target, duplicate shortest connector paths
// until degrees balance, then extract an Euler path. Returns arc positions
// or empty on failure.
std::vector<int> postman_walk(const StateMachine& sm, const Arcs& arcs,
                              std::size_t ai, const std::set<std::string>& targets) {
  Specialized sp = specialize(sm, arcs, ai);
  int n = static_cast<int>(sm.states().size());

  std::vector<std::vector<std::vector<int>>> paths(n);
  for (int s = 0; s < n; ++s) paths[s] = shortest_paths(sm, arcs, sp, s);
  auto connected = [&](int from, int to) {
    return from == to || !paths[from][to].empty();
  };
  auto reachable = [&](int s) { return connected(sm.initial(), s); };

  // one representative arc per target: smallest id with reachable source
  std::map<std::string, int> rep;
  for (int p : sp.positions) {
    const auto& t = sm.transitions()[arcs.order[p]];
    if (!targets.count(t.origin) || !reachable(t.source)) continue;
    if (!rep.count(t.origin)) rep[t.origin] = p;
  }
  if (rep.size() != targets.size()) return {};

  std::vector<int> required;
  std::vector<int> balance(n, 0);  // out-degree minus in-degree
  for (const auto& [origin, p] : rep) {
    required.push_back(p);
    const auto& t = sm.transitions()[arcs.order[p]];
    ++balance[t.source];
    --balance[t.target];
  }

  // Balance degrees for every candidate end state and keep the cheapest.
  int best_end = -1;
  std::vector<int> best_extra;
  for (int end = 0; end < n; ++end) {
    if (!reachable(end)) continue;
    std::vector<int> bal = balance;
    // virtual arc end -> initial turns the Euler path into a circuit
    ++bal[end];
    --bal[sm.initial()];
    std::vector<int> extra;
    bool feasible = true;
    while (true) {
      int deficit = -1, surplus = -1;
      std::size_t best_len = std::numeric_limits<std::size_t>::max();
      for (int v = 0; v < n; ++v) {
        if (bal[v] >= 0) continue;
        for (int s = 0; s < n; ++s) {
          if (bal[s] <= 0 || !connected(v, s)) continue;
          std::size_t len = paths[v][s].size();
          if (len < best_len) {
            best_len = len;
            deficit = v;
            surplus = s;
          }
        }
      }
      if (deficit < 0) {
        for (int v = 0; v < n; ++v)
          if (bal[v] != 0) feasible = false;
        break;
      }
      // a duplicated path deficit -> surplus shifts one unit of imbalance
      for (int p : paths[deficit][surplus]) extra.push_back(p);
      ++bal[deficit];
      --bal[surplus];
    }
    if (!feasible) continue;
    if (best_end < 0 || extra.size() < best_extra.size()) {
      best_end = end;
      best_extra = extra;
    }
  }
  if (best_end < 0) return {};

  // Euler circuit via Hierholzer over required + duplicated + virtual arcs.
  struct Edge {
    int from, to, pos;  // pos -1 marks the virtual arc
  };
  std::vector<Edge> edges;
  for (int p : required) {
    const auto& t = sm.transitions()[arcs.order[p]];
    edges.push_back({t.source, t.target, p});
  }
  for (int p : best_extra) {
    const auto& t = sm.transitions()[arcs.order[p]];
    edges.push_back({t.source, t.target, p});
  }
  edges.push_back({best_end, sm.initial(), -1});

  std::vector<std::vector<int>> adj(n);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    adj[edges[e].from].push_back(e);
  for (auto& list : adj)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      if (edges[a].pos < 0) return false;  // virtual arc last
      if (edges[b].pos < 0) return true;
      return sm.transitions()[arcs.order[edges[a].pos]].id <
             sm.transitions()[arcs.order[edges[b].pos]].id;
    });

  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::pair<int, int>> stack{{sm.initial(), -1}};  // (vertex, incoming edge)
  std::vector<int> circuit;
  while (!stack.empty()) {
    auto [v, in_edge] = stack.back();
    if (cursor[v] < adj[v].size()) {
      int e = adj[v][cursor[v]++];
      stack.push_back({edges[e].to, e});
    } else {
      stack.pop_back();
      if (in_edge >= 0) circuit.push_back(in_edge);
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  if (circuit.size() != edges.size()) return {};  // arc graph disconnected

  // rotate so the virtual arc comes last, then drop it
  auto vit = std::find_if(circuit.begin(), circuit.end(),
                          [&](int e) { return edges[e].pos < 0; });
  std::vector<int> walk;
  for (auto it = vit + 1; it != circuit.end(); ++it) walk.push_back(edges[*it].pos);
  for (auto it = circuit.begin(); it != vit; ++it) walk.push_back(edges[*it].pos);
  return walk;
}

}  // namespace

TestSuite generate_all_transitions(const StateMachine& sm,
                                   const AssignmentSpec& assignment,
                                   GenStrategy strategy) {
  if (!sm.is_flat())
    throw ValidationError("test generation requires a flat state machine");
  bool free_mode = std::holds_alternative<FreeAssignment>(assignment);

  Universe u = build_universe(sm, assignment);
  Arcs arcs = build_arcs(sm, u);

  auto target_list = sm.coverage_targets();
  std::set<std::string> targets(target_list.begin(), target_list.end());
  auto coverable = coverable_targets(sm, u, arcs);
  std::vector<std::string> missing;
  for (const auto& t : targets)
    if (!coverable.count(t)) missing.push_back(t);
  if (!missing.empty()) throw UncoverableError(std::move(missing));

  std::vector<TestCase> cases = run_greedy(sm, u, arcs, targets, free_mode);

  if (strategy == GenStrategy::FewestCases && !targets.empty()) {
    // best single assignment: enables-and-reaches the most targets
    std::size_t best_ai = 0, best_count = 0;
    for (std::size_t i = 0; i < u.assignments.size(); ++i) {
      std::size_t count = 0;
      Specialized sp = specialize(sm, arcs, i);
      auto paths = shortest_paths(sm, arcs, sp, sm.initial());
      std::set<std::string> hit;
      for (int p : sp.positions) {
        const auto& t = sm.transitions()[arcs.order[p]];
        if ((t.source == sm.initial() || !paths[t.source].empty()) &&
            targets.count(t.origin))
          hit.insert(t.origin);
      }
      count = hit.size();
      if (count > best_count) {
        best_count = count;
        best_ai = i;
      }
    }
    if (best_count == targets.size()) {
      auto walk_positions = postman_walk(sm, arcs, best_ai, targets);
      if (!walk_positions.empty()) {
        Walk walk{sm.initial(), full_compat(u), {}};
        std::set<std::string> uncovered = targets;
        bool ok = true;
        for (int p : walk_positions) {
          const auto& t = sm.transitions()[arcs.order[p]];
          if (t.source != walk.state) {
            ok = false;
            break;
          }
          Compat next = narrow(walk.compat, arcs.sat[p]);
          if (next.empty()) {
            ok = false;
            break;
          }
          walk.compat = std::move(next);
          walk.state = t.target;
          walk.arc_positions.push_back(p);
          uncovered.erase(t.origin);
        }
        if (ok && uncovered.empty()) {
          std::size_t greedy_events = 0;
          for (const auto& c : cases) greedy_events += c.events.size();
          bool better = cases.size() > 1 ||
                        (cases.size() == 1 && walk.arc_positions.size() < greedy_events);
          if (better)
            cases = {finalize_case(sm, u, arcs, walk, 1, free_mode)};
        }
      }
    }
  }

  TestSuite suite;
  suite.source_model = sm.name();
  suite.cases = std::move(cases);
  suite.coverage = check_coverage(sm, suite);
  return suite;
}

CoverageReport check_coverage(const StateMachine& sm, const TestSuite& suite) {
  std::vector<RawCase> raw;
  for (const auto& c : suite.cases) raw.push_back({c.id, c.events, c.prolog});
  return check_coverage(sm, raw);
}

CoverageReport check_coverage(const StateMachine& sm,
                              const std::vector<RawCase>& cases) {
  if (!sm.is_flat())
    throw ValidationError("coverage checking requires a flat state machine");
  CoverageReport report;
  report.targets = sm.coverage_targets();
  for (const auto& t : report.targets) report.hit_counts[t] = 0;

  for (const auto& c : cases) {
    Trace trace;
    try {
      trace = replay(sm, c.events, c.assignment);
    } catch (const ReplayError& e) {
      ReplayError with_case = e;
      with_case.case_id = c.id;
      throw with_case;
    }
    for (const auto& step : trace.steps) ++report.hit_counts[step.transition];
  }
  for (const auto& [id, hits] : report.hit_counts)
    if (hits > 0) report.covered.push_back(id);
  report.ratio = report.targets.empty()
                     ? 1.0
                     : static_cast<double>(report.covered.size()) /
                           static_cast<double>(report.targets.size());
  return report;
}

}  // namespace pltgen
