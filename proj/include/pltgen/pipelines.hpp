#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pltgen/feature_model.hpp"
#include "pltgen/mapping.hpp"
#include "pltgen/state_machine.hpp"
#include "pltgen/test_gen.hpp"

namespace pltgen {

enum class PipelineKind { TopDown, BottomUp };

struct VariantEntry {
  Configuration config;
  StateMachine model;  // flat 100% model of this variant
  TestSuite suite;
  std::vector<std::string> prune_warnings;
};

struct CaseConfig {
  std::string case_id;
  Configuration config;
};

/// Result of either pipeline. Top-down fills `variants` directly; bottom-up
/// additionally carries the enriched machine, the suite generated on it, and
/// the per-case extracted configurations (variants then group the cases by
/// configuration). Embedded models make the plan self-contained so that
/// variant minimization can re-derive 100% models.
struct ProductLineTestPlan {
  PipelineKind kind = PipelineKind::TopDown;
  std::string feature_model_name;
  std::string model_name;
  GenStrategy strategy = GenStrategy::Greedy;
  std::set<FmCriterion> criteria;

  std::vector<std::string> all_features;   // sorted
  std::vector<std::string> deselectable;   // sorted

  std::vector<VariantEntry> variants;

  std::optional<StateMachine> base_model;
  std::optional<MappingModel> mapping;
  std::optional<StateMachine> enriched;  // flat enriched 150% machine
  std::optional<TestSuite> suite;        // suite generated on it
  std::vector<CaseConfig> extracted;
};

/// Variants first: derive configurations from the feature model, prune the
/// 150% machine per variant, flatten, and generate per-variant suites.
/// Stage failures are annotated with the variant that caused them.
/// `jobs` > 1 generates variants concurrently with a deterministic merge.
ProductLineTestPlan top_down(const FeatureModel& fm, const StateMachine& sm150,
                             const MappingModel& map,
                             const std::set<FmCriterion>& criteria,
                             GenStrategy strategy, unsigned jobs = 1);

/// Folds the feature model into the 150% machine: one 0/1 variable per
/// feature, presence conditions become guards on mapped transitions and on
/// transitions entering mapped states, and the admissibility condition is
/// feature-model validity over the variables.
StateMachine enrich(const StateMachine& sm150, const FeatureModel& fm,
                    const MappingModel& map);

/// Tests first: generate on the enriched 150% machine with free assignments,
/// then extract the configuration each test case requires from its prolog.
ProductLineTestPlan bottom_up(const FeatureModel& fm, const StateMachine& sm150,
                              const MappingModel& map, GenStrategy strategy);

/// The valid configuration a test case requires: prolog-bound features keep
/// their value, unbound features are completed preferring deselection
/// (fewest selected features, ties lexicographic).
Configuration extract_configuration(const TestCase& test_case,
                                    const FeatureModel& fm);

/// Regroups a bottom-up plan's cases under the fewest configurations found
/// by greedily merging compatible prologs. Merging never sacrifices
/// coverage: a merge happens only if every affected case still replays
/// under the merged configuration.
ProductLineTestPlan minimize_variants(const ProductLineTestPlan& plan,
                                      const FeatureModel& fm);

std::string pipeline_kind_name(PipelineKind kind);
std::string strategy_name(GenStrategy strategy);
std::string criterion_name(FmCriterion criterion);

}  // namespace pltgen
