#include "pltgen/mapping.hpp"

#include <algorithm>

#include "pltgen/errors.hpp"

namespace pltgen {

const BoolExpr& MappingModel::presence_of(const std::string& element_id) const {
  auto it = element_entry_.find(element_id);
  if (it == element_entry_.end()) return always_;
  return entries_[it->second].presence;
}

MappingModel::Builder::Builder(const FeatureModel& fm, const StateMachine& sm)
    : fm_(fm), sm_(sm) {
  for (const auto& id : fm.feature_ids()) mm_.feature_ids_.push_back(id);
}

MappingModel::Builder& MappingModel::Builder::entry(
    BoolExpr presence, const std::vector<std::string>& elements) {
  for (const auto& v : variables(presence))
    if (!fm_.has_feature(v))
      throw ParseError("mapping references unknown feature '" + v + "'");
  for (const auto& el : elements) {
    if (!sm_.has_state(el) && !sm_.has_transition(el))
      throw ParseError("mapping references unknown element '" + el + "'");
    if (mm_.element_entry_.count(el))
      throw ParseError("element '" + el + "' appears in two mapping entries");
    mm_.element_entry_[el] = static_cast<int>(mm_.entries_.size());
  }
  mm_.entries_.push_back({std::move(presence), elements});
  return *this;
}

MappingModel MappingModel::Builder::build() { return std::move(mm_); }

namespace {

// Reachability on a guard-folded hierarchical machine. A residual guard may
// or may not hold at runtime, so guarded transitions neither suppress outer
// same-trigger transitions nor are assumed dead.
struct Reachability {
  std::vector<bool> leaf_reached;       // by state index
  std::vector<bool> transition_fired;   // by transition index
};

Reachability analyze(const StateMachine& sm) {
  Reachability r;
  r.leaf_reached.assign(sm.states().size(), false);
  r.transition_fired.assign(sm.transitions().size(), false);

  std::vector<int> work{sm.resolve_entry(sm.initial())};
  r.leaf_reached[work[0]] = true;
  while (!work.empty()) {
    int leaf = work.back();
    work.pop_back();
    auto chain = sm.ancestor_chain(leaf);

    std::set<std::string> triggers;
    for (const auto& t : sm.transitions()) triggers.insert(t.trigger.value_or(""));
    for (const auto& trig : triggers) {
      for (int depth_state : chain) {
        bool definite = false;
        for (std::size_t i = 0; i < sm.transitions().size(); ++i) {
          const auto& t = sm.transitions()[i];
          if (t.source != depth_state || t.trigger.value_or("") != trig) continue;
          r.transition_fired[i] = true;
          if (!t.guard) definite = true;
          int entry = sm.resolve_entry(t.target);
          if (!r.leaf_reached[entry]) {
            r.leaf_reached[entry] = true;
            work.push_back(entry);
          }
        }
        if (definite) break;  // an unguarded transition pre-empts outer ones
      }
    }
  }
  return r;
}

}  // namespace

PruneResult prune(const StateMachine& sm150, const MappingModel& map,
                  const Configuration& cfg) {
  const auto& states = sm150.states();
  const auto& transitions = sm150.transitions();

  auto selected = [&](const std::string& feature) { return cfg.contains(feature); };
  auto present = [&](const std::string& element_id) {
    return eval(map.presence_of(element_id), selected);
  };

  // Guard variables named after features fold to the configuration's choice.
  std::map<std::string, bool> binding;
  for (const auto& f : map.feature_ids())
    binding[feature_variable_name(f)] = cfg.contains(f);

  std::vector<bool> state_removed(states.size(), false);
  for (std::size_t i = 0; i < states.size(); ++i) {
    // parents precede children in the arena, so one pass closes the subtree
    bool parent_gone = states[i].parent >= 0 && state_removed[states[i].parent];
    state_removed[i] = parent_gone || !present(states[i].id);
  }

  // A composite whose substates all vanished vanishes too.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (state_removed[i] || !states[i].composite) continue;
      bool any_left = false;
      for (int sub : states[i].substates)
        if (!state_removed[sub]) any_left = true;
      if (!any_left) {
        state_removed[i] = true;
        changed = true;
      }
    }
  }

  if (state_removed[sm150.initial()])
    throw PruneError("initial state '" + sm150.initial_id() + "' pruned away");
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (state_removed[i] || !states[i].composite) continue;
    if (state_removed[states[i].initial_substate])
      throw PruneError("initial substate of '" + states[i].id +
                       "' pruned while the composite survives");
  }

  std::vector<bool> trans_removed(transitions.size(), false);
  std::vector<std::optional<BoolExpr>> folded(transitions.size());
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const auto& t = transitions[i];
    if (state_removed[t.source] || state_removed[t.target] || !present(t.id)) {
      trans_removed[i] = true;
      continue;
    }
    if (t.guard) {
      BoolExpr g = substitute(*t.guard, binding);
      if (is_const(g, false)) {
        trans_removed[i] = true;
        continue;
      }
      if (!is_const(g, true)) folded[i] = std::move(g);
    }
  }

  if (sm150.admissible()) {
    BoolExpr a = substitute(*sm150.admissible(), binding);
    if (is_const(a, false))
      throw PruneError("configuration violates the admissibility condition");
  }

  auto rebuild = [&](const std::string& name) {
    StateMachine::Builder b(name);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (state_removed[i]) continue;
      b.state(states[i].id,
              states[i].parent >= 0 ? states[states[i].parent].id : std::string{},
              states[i].final_state);
    }
    for (std::size_t i = 0; i < states.size(); ++i)
      if (!state_removed[i] && states[i].composite)
        b.initial_substate(states[i].id, states[states[i].initial_substate].id);
    b.initial(sm150.initial_id());
    for (const auto& v : sm150.variables())
      if (!binding.count(v.name)) b.variable(v.name, v.initial);
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      if (trans_removed[i]) continue;
      const auto& t = transitions[i];
      b.transition(t.id, states[t.source].id, states[t.target].id, t.trigger,
                   folded[i], t.tags, t.origin);
    }
    return b.build();
  };

  StateMachine candidate = rebuild(sm150.name());
  Reachability reach = analyze(candidate);

  PruneResult result{candidate, {}};
  std::vector<bool> keep_state(states.size(), false);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (state_removed[i] || states[i].composite) continue;
    if (reach.leaf_reached[candidate.state_index(states[i].id)])
      keep_state[i] = true;
  }
  // A surviving composite is kept while any substate is; its initial
  // substate is retained even when unreachable, to stay well-formed.
  for (std::size_t i = states.size(); i-- > 0;) {
    if (state_removed[i] || !states[i].composite) continue;
    bool any = false;
    for (int sub : states[i].substates) any = any || keep_state[sub];
    if (any) {
      keep_state[i] = true;
      // keep the whole entry chain so the composite stays enterable
      for (int init = states[i].initial_substate; init >= 0;
           init = states[init].initial_substate) {
        if (!keep_state[init]) {
          keep_state[init] = true;
          result.warnings.push_back("unreachable state '" + states[init].id +
                                    "' retained as initial substate of '" +
                                    states[i].id + "'");
        }
        if (!states[init].composite) break;
      }
    }
  }
  keep_state[sm150.initial()] = true;

  for (std::size_t i = 0; i < states.size(); ++i)
    if (!state_removed[i] && !keep_state[i]) {
      state_removed[i] = true;
      result.warnings.push_back("unreachable state '" + states[i].id + "' removed");
    }
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    if (trans_removed[i]) continue;
    const auto& t = transitions[i];
    bool fired = reach.transition_fired[candidate.transition_index(t.id)];
    if (!fired || state_removed[t.source] || state_removed[t.target]) {
      trans_removed[i] = true;
      result.warnings.push_back("unreachable transition '" + t.id + "' removed");
    }
  }

  result.machine = rebuild(sm150.name());
  bool any_triggered = false;
  for (const auto& t : result.machine.transitions())
    if (t.trigger) any_triggered = true;
  if (!any_triggered)
    throw PruneError("pruned model has no reachable triggered transition");
  return result;
}

}  // namespace pltgen
