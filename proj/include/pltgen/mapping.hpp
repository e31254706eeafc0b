#pragma once

#include <map>
#include <string>
#include <vector>

#include "pltgen/bool_expr.hpp"
#include "pltgen/feature_model.hpp"
#include "pltgen/state_machine.hpp"

namespace pltgen {

struct MappingEntry {
  BoolExpr presence;                  // over feature ids
  std::vector<std::string> elements;  // state and transition ids
};

/// Presence conditions attached to 150% model elements. Elements not
/// mentioned by any entry are unconditionally present.
class MappingModel {
 public:
  class Builder;

  const std::vector<MappingEntry>& entries() const { return entries_; }

  /// Presence condition of an element (constant true if unmapped).
  const BoolExpr& presence_of(const std::string& element_id) const;

  /// Feature ids of the model this mapping was validated against, in
  /// document order. Lets prune fold feature guard variables without
  /// re-threading the feature model.
  const std::vector<std::string>& feature_ids() const { return feature_ids_; }

 private:
  friend class Builder;
  std::vector<MappingEntry> entries_;
  std::map<std::string, int> element_entry_;
  std::vector<std::string> feature_ids_;
  BoolExpr always_ = BoolExpr::constant(true);
};

class MappingModel::Builder {
 public:
  /// References are validated against the given models.
  Builder(const FeatureModel& fm, const StateMachine& sm);

  Builder& entry(BoolExpr presence, const std::vector<std::string>& elements);
  MappingModel build();

 private:
  const FeatureModel& fm_;
  const StateMachine& sm_;
  MappingModel mm_;
};

struct PruneResult {
  StateMachine machine;
  std::vector<std::string> warnings;  // removed-unreachable notices
};

/// Derives the 100% model for a configuration by deleting every element
/// whose presence condition is false, then removing what became unreachable
/// (reported as warnings). Feature guard variables are folded to constants.
/// Throws PruneError when the result cannot serve as a test model.
PruneResult prune(const StateMachine& sm150, const MappingModel& map,
                  const Configuration& cfg);

}  // namespace pltgen
