#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pltgen/bool_expr.hpp"

namespace pltgen {

struct State {
  std::string id;
  bool composite = false;
  int parent = -1;               // -1 for top-level states
  std::vector<int> substates;    // document order, composite only
  int initial_substate = -1;     // composite only
  bool final_state = false;
};

struct Transition {
  std::string id;
  std::string origin;            // coverage identity, survives flattening
  int source = -1;
  int target = -1;
  std::optional<std::string> trigger;
  std::optional<BoolExpr> guard;
  std::vector<std::string> tags;
};

struct GuardVariable {
  std::string name;
  std::optional<bool> initial;
};

/// Hierarchical or flat state machine. Construct through Builder; immutable
/// afterwards. Serves as 150% model, 100% model, and enriched model alike.
class StateMachine {
 public:
  class Builder;

  const std::string& name() const { return name_; }
  const std::vector<State>& states() const { return states_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<GuardVariable>& variables() const { return variables_; }
  const std::optional<BoolExpr>& admissible() const { return admissible_; }
  int initial() const { return initial_; }
  const std::string& initial_id() const { return states_[initial_].id; }

  bool has_state(const std::string& id) const { return state_index_.count(id) > 0; }
  int state_index(const std::string& id) const;       // throws ValidationError
  bool has_transition(const std::string& id) const { return transition_index_.count(id) > 0; }
  int transition_index(const std::string& id) const;  // throws ValidationError

  bool is_flat() const;

  /// Distinct coverage identities of triggered transitions, sorted.
  std::vector<std::string> coverage_targets() const;
  /// All trigger names, sorted.
  std::vector<std::string> alphabet() const;
  /// Variables referenced by any guard, sorted.
  std::vector<std::string> guard_variables() const;

  /// Chain of a state and its ancestors, innermost first.
  std::vector<int> ancestor_chain(int state) const;
  /// Follows initial-substate links down to a simple state.
  int resolve_entry(int state) const;

 private:
  friend class Builder;
  std::string name_;
  std::vector<State> states_;
  std::vector<Transition> transitions_;
  std::vector<GuardVariable> variables_;
  std::optional<BoolExpr> admissible_;
  int initial_ = -1;
  std::map<std::string, int> state_index_;
  std::map<std::string, int> transition_index_;
};

class StateMachine::Builder {
 public:
  explicit Builder(std::string name);

  /// Adds a state; parent empty for top level. Parents must be added first.
  Builder& state(const std::string& id, const std::string& parent = {},
                 bool final_state = false);
  Builder& initial_substate(const std::string& composite, const std::string& substate);
  Builder& initial(const std::string& id);
  Builder& variable(const std::string& name, std::optional<bool> init = std::nullopt);
  Builder& transition(const std::string& id, const std::string& source,
                      const std::string& target,
                      std::optional<std::string> trigger = std::nullopt,
                      std::optional<BoolExpr> guard = std::nullopt,
                      std::vector<std::string> tags = {},
                      std::optional<std::string> origin = std::nullopt);
  Builder& admissible(BoolExpr expr);

  /// Validates well-formedness and yields the machine. Throws ParseError.
  StateMachine build();

 private:
  StateMachine sm_;
  std::string initial_id_;
  std::map<std::string, std::string> pending_initial_substates_;
};

struct TraceStep {
  std::string event;
  std::string transition;  // coverage identity of the fired transition
  std::string state;       // id of the state reached
  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::vector<TraceStep> steps;
  bool operator==(const Trace&) const = default;
};

/// Rewrites a hierarchical machine into an equivalent flat one: boundary
/// transitions are replicated from every substate (with guards strengthened
/// so that deeper same-trigger transitions keep priority), and transitions
/// entering a composite are retargeted to its initial substate. Replicas
/// keep the origin transition's coverage identity.
StateMachine flatten(const StateMachine& sm);

/// Deterministically replays an event sequence on a flat machine under a
/// static guard-variable assignment fixed before the first step. Exactly one
/// transition must be enabled per step; otherwise ReplayError is thrown.
/// Variables are looked up lazily, so the assignment only needs to cover
/// guards actually encountered.
Trace replay(const StateMachine& sm, const std::vector<std::string>& events,
             const std::map<std::string, bool>& assignment);

/// Graphviz rendering, one line per transition.
std::string to_dot(const StateMachine& sm);

}  // namespace pltgen
