#include "pltgen/state_machine.hpp"

#include <algorithm>

#include "pltgen/errors.hpp"

namespace pltgen {

int StateMachine::state_index(const std::string& id) const {
  auto it = state_index_.find(id);
  if (it == state_index_.end())
    throw ValidationError("unknown state '" + id + "'");
  return it->second;
}

int StateMachine::transition_index(const std::string& id) const {
  auto it = transition_index_.find(id);
  if (it == transition_index_.end())
    throw ValidationError("unknown transition '" + id + "'");
  return it->second;
}

bool StateMachine::is_flat() const {
  for (const auto& s : states_)
    if (s.composite) return false;
  return true;
}

std::vector<std::string> StateMachine::coverage_targets() const {
  std::set<std::string> targets;
  for (const auto& t : transitions_)
    if (t.trigger) targets.insert(t.origin);
  return {targets.begin(), targets.end()};
}

std::vector<std::string> StateMachine::alphabet() const {
  std::set<std::string> events;
  for (const auto& t : transitions_)
    if (t.trigger) events.insert(*t.trigger);
  return {events.begin(), events.end()};
}

std::vector<std::string> StateMachine::guard_variables() const {
  std::set<std::string> vars;
  for (const auto& t : transitions_)
    if (t.guard) collect_variables(*t.guard, vars);
  return {vars.begin(), vars.end()};
}

std::vector<int> StateMachine::ancestor_chain(int state) const {
  std::vector<int> chain;
  for (int s = state; s >= 0; s = states_[s].parent) chain.push_back(s);
  return chain;
}

int StateMachine::resolve_entry(int state) const {
  int s = state;
  while (states_[s].composite) s = states_[s].initial_substate;
  return s;
}

StateMachine::Builder::Builder(std::string name) { sm_.name_ = std::move(name); }

StateMachine::Builder& StateMachine::Builder::state(const std::string& id,
                                                    const std::string& parent,
                                                    bool final_state) {
  if (sm_.state_index_.count(id))
    throw ParseError("duplicate state id '" + id + "'");
  State s;
  s.id = id;
  s.final_state = final_state;
  if (!parent.empty()) {
    auto it = sm_.state_index_.find(parent);
    if (it == sm_.state_index_.end())
      throw ParseError("substate '" + id + "' declared before parent '" + parent + "'");
    s.parent = it->second;
  }
  int idx = static_cast<int>(sm_.states_.size());
  sm_.states_.push_back(std::move(s));
  sm_.state_index_[id] = idx;
  if (sm_.states_[idx].parent >= 0) {
    State& p = sm_.states_[sm_.states_[idx].parent];
    p.composite = true;
    p.substates.push_back(idx);
  }
  return *this;
}

StateMachine::Builder& StateMachine::Builder::initial_substate(
    const std::string& composite, const std::string& substate) {
  pending_initial_substates_[composite] = substate;
  return *this;
}

StateMachine::Builder& StateMachine::Builder::initial(const std::string& id) {
  initial_id_ = id;
  return *this;
}

StateMachine::Builder& StateMachine::Builder::variable(const std::string& name,
                                                       std::optional<bool> init) {
  for (const auto& v : sm_.variables_)
    if (v.name == name) throw ParseError("duplicate variable '" + name + "'");
  sm_.variables_.push_back({name, init});
  return *this;
}

StateMachine::Builder& StateMachine::Builder::transition(
    const std::string& id, const std::string& source, const std::string& target,
    std::optional<std::string> trigger, std::optional<BoolExpr> guard,
    std::vector<std::string> tags, std::optional<std::string> origin) {
  if (sm_.transition_index_.count(id))
    throw ParseError("duplicate transition id '" + id + "'");
  auto src = sm_.state_index_.find(source);
  if (src == sm_.state_index_.end())
    throw ParseError("transition '" + id + "' has unknown source '" + source + "'");
  auto tgt = sm_.state_index_.find(target);
  if (tgt == sm_.state_index_.end())
    throw ParseError("transition '" + id + "' has unknown target '" + target + "'");
  Transition t;
  t.id = id;
  t.origin = origin.value_or(id);
  t.source = src->second;
  t.target = tgt->second;
  t.trigger = std::move(trigger);
  t.guard = std::move(guard);
  t.tags = std::move(tags);
  sm_.transition_index_[id] = static_cast<int>(sm_.transitions_.size());
  sm_.transitions_.push_back(std::move(t));
  return *this;
}

StateMachine::Builder& StateMachine::Builder::admissible(BoolExpr expr) {
  sm_.admissible_ = std::move(expr);
  return *this;
}

StateMachine StateMachine::Builder::build() {
  if (sm_.states_.empty()) throw ParseError("state machine has no states");
  for (const auto& [comp, sub] : pending_initial_substates_) {
    auto cit = sm_.state_index_.find(comp);
    if (cit == sm_.state_index_.end())
      throw ParseError("initial substate declared for unknown state '" + comp + "'");
    auto sit = sm_.state_index_.find(sub);
    if (sit == sm_.state_index_.end())
      throw ParseError("unknown initial substate '" + sub + "' for '" + comp + "'");
    if (sm_.states_[sit->second].parent != cit->second)
      throw ParseError("initial substate '" + sub + "' is not a substate of '" + comp + "'");
    sm_.states_[cit->second].initial_substate = sit->second;
  }
  for (const auto& s : sm_.states_)
    if (s.composite && s.initial_substate < 0)
      throw ParseError("composite state '" + s.id + "' has no initial substate");
  if (initial_id_.empty()) throw ParseError("state machine has no initial state");
  auto it = sm_.state_index_.find(initial_id_);
  if (it == sm_.state_index_.end())
    throw ParseError("unknown initial state '" + initial_id_ + "'");
  if (sm_.states_[it->second].parent != -1)
    throw ParseError("initial state '" + initial_id_ + "' must be top-level");
  sm_.initial_ = it->second;

  std::set<std::string> declared;
  for (const auto& v : sm_.variables_) declared.insert(v.name);
  auto check_vars = [&](const BoolExpr& e, const std::string& where) {
    for (const auto& v : pltgen::variables(e))
      if (!declared.count(v))
        throw ParseError("undeclared guard variable '" + v + "' in " + where);
  };
  for (const auto& t : sm_.transitions_)
    if (t.guard) check_vars(*t.guard, "transition '" + t.id + "'");
  if (sm_.admissible_) check_vars(*sm_.admissible_, "the admissibility condition");
  return std::move(sm_);
}

StateMachine flatten(const StateMachine& sm) {
  StateMachine::Builder b(sm.name());

  std::vector<int> leaves;
  for (int i = 0; i < static_cast<int>(sm.states().size()); ++i)
    if (!sm.states()[i].composite) leaves.push_back(i);
  for (int leaf : leaves)
    b.state(sm.states()[leaf].id, {}, sm.states()[leaf].final_state);
  b.initial(sm.states()[sm.resolve_entry(sm.initial())].id);
  for (const auto& v : sm.variables()) b.variable(v.name, v.initial);
  if (sm.admissible()) b.admissible(*sm.admissible());

  // Instances of transition t from leaf l, for every leaf below t's source.
  // A deeper transition with the same trigger pre-empts an outer one, which
  // is encoded by conjoining the negations of the deeper guards; an
  // unguarded deeper transition suppresses the instance entirely.
  struct Instance {
    const Transition* t;
    int leaf;
    std::optional<BoolExpr> guard;
  };
  std::vector<Instance> instances;
  std::map<std::string, int> instance_count;
  for (const auto& t : sm.transitions()) {
    for (int leaf : leaves) {
      auto chain = sm.ancestor_chain(leaf);
      auto pos = std::find(chain.begin(), chain.end(), t.source);
      if (pos == chain.end()) continue;

      std::vector<BoolExpr> conjuncts;
      if (t.guard) conjuncts.push_back(*t.guard);
      bool suppressed = false;
      for (const auto& other : sm.transitions()) {
        if (&other == &t || other.trigger != t.trigger) continue;
        auto opos = std::find(chain.begin(), pos, other.source);
        if (opos == pos) continue;  // not strictly deeper on this chain
        if (!other.guard) {
          suppressed = true;
          break;
        }
        BoolExpr neg = BoolExpr::negation(*other.guard);
        if (std::find(conjuncts.begin(), conjuncts.end(), neg) == conjuncts.end())
          conjuncts.push_back(std::move(neg));
      }
      if (suppressed) continue;

      Instance inst;
      inst.t = &t;
      inst.leaf = leaf;
      if (conjuncts.size() == 1)
        inst.guard = conjuncts[0];
      else if (conjuncts.size() > 1)
        inst.guard = BoolExpr::conjunction(std::move(conjuncts));
      instances.push_back(std::move(inst));
      ++instance_count[t.id];
    }
  }

  for (const auto& inst : instances) {
    std::string id = inst.t->id;
    if (instance_count[inst.t->id] > 1) id += "@" + sm.states()[inst.leaf].id;
    b.transition(id, sm.states()[inst.leaf].id,
                 sm.states()[sm.resolve_entry(inst.t->target)].id,
                 inst.t->trigger, inst.guard, inst.t->tags, inst.t->origin);
  }
  return b.build();
}

Trace replay(const StateMachine& sm, const std::vector<std::string>& events,
             const std::map<std::string, bool>& assignment) {
  if (!sm.is_flat())
    throw ValidationError("replay requires a flat state machine");

  Trace trace;
  int current = sm.initial();
  for (std::size_t step = 0; step < events.size(); ++step) {
    const std::string& event = events[step];
    std::vector<const Transition*> enabled;
    for (const auto& t : sm.transitions()) {
      if (t.source != current || !t.trigger || *t.trigger != event) continue;
      bool open = true;
      if (t.guard) {
        try {
          open = eval(*t.guard, assignment);
        } catch (const ValidationError& e) {
          throw ReplayError(ReplayError::Kind::UnboundVariable, step, {}, e.what());
        }
      }
      if (open) enabled.push_back(&t);
    }
    if (enabled.empty())
      throw ReplayError(ReplayError::Kind::NoEnabledTransition, step, {},
                        "event '" + event + "' in state '" + sm.states()[current].id + "'");
    if (enabled.size() > 1) {
      std::vector<std::string> ids;
      for (const auto* t : enabled) ids.push_back(t->id);
      throw ReplayError(ReplayError::Kind::NondeterministicChoice, step, std::move(ids));
    }
    current = enabled[0]->target;
    trace.steps.push_back({event, enabled[0]->origin, sm.states()[current].id});
  }
  return trace;
}

std::string to_dot(const StateMachine& sm) {
  std::string out = "digraph \"" + sm.name() + "\" {\n  rankdir=LR;\n";
  out += "  \"\" [shape=point];\n";
  out += "  \"\" -> \"" + sm.initial_id() + "\";\n";
  for (const auto& t : sm.transitions()) {
    std::string label = t.trigger.value_or("");
    if (t.guard) label += " [" + to_string(*t.guard) + "]";
    out += "  \"" + sm.states()[t.source].id + "\" -> \"" + sm.states()[t.target].id +
           "\" [label=\"" + label + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace pltgen
