#pragma once

// Seeded random model generators for the property suites.

#include <random>
#include <string>
#include <vector>

#include "pltgen/feature_model.hpp"
#include "pltgen/mapping.hpp"
#include "pltgen/state_machine.hpp"

namespace pltgen::testing {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive bounds
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random feature tree with mixed link kinds, groups, and a few cross-tree
/// constraints. May be unsatisfiable.
FeatureModel random_feature_model(Rng& rng, int max_features);

/// Random flat, guard-free machine in which every state is reachable and
/// (state, trigger) pairs are unique.
StateMachine random_flat_machine(Rng& rng, int max_states, int max_transitions);

/// Random machine with composite states, boundary transitions, entries that
/// target composites, and occasional same-trigger inner/outer overlaps.
StateMachine random_hierarchical_machine(Rng& rng);

struct ProductLineFixture {
  FeatureModel fm;
  StateMachine sm;
  MappingModel map;
};

/// Random small product line: a strongly connected unmapped core plus
/// feature-mapped decoration states and transitions. Every mapped feature
/// occurs in at least one valid configuration, so all mapped elements are
/// coverable by bottom-up generation.
ProductLineFixture random_product_line(Rng& rng, int max_features, int max_states);

}  // namespace pltgen::testing
