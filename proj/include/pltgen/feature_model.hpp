#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pltgen/bool_expr.hpp"

namespace pltgen {

enum class ChildKind { Mandatory, Optional, OrMember, AltMember };
enum class GroupKind { Or, Alternative };

struct FeatureNode {
  std::string id;
  int parent = -1;                       // -1 for the root
  ChildKind kind = ChildKind::Mandatory; // meaningless for the root
  int group = -1;                        // index into groups() for group members
  std::vector<int> children;             // document order
};

struct FeatureGroup {
  GroupKind kind = GroupKind::Or;
  int parent = -1;
  std::vector<int> members;
};

/// A set of selected feature ids. Validity is always relative to a model.
struct Configuration {
  std::set<std::string> selected;

  bool contains(const std::string& id) const { return selected.count(id) > 0; }
  std::vector<std::string> sorted_ids() const {
    return {selected.begin(), selected.end()};
  }
  bool operator==(const Configuration&) const = default;
  bool operator<(const Configuration& other) const {
    return selected < other.selected;
  }
};

/// Feature tree with or/alternative groups and cross-tree constraints.
/// Construct through Builder; instances are immutable afterwards.
class FeatureModel {
 public:
  class Builder;

  const std::string& name() const { return name_; }
  std::size_t feature_count() const { return nodes_.size(); }
  const std::vector<FeatureNode>& nodes() const { return nodes_; }
  const std::vector<FeatureGroup>& groups() const { return groups_; }
  const std::vector<BoolExpr>& constraints() const { return constraints_; }
  const FeatureNode& root() const { return nodes_[0]; }

  bool has_feature(const std::string& id) const { return index_.count(id) > 0; }
  int index_of(const std::string& id) const;  // throws UnknownFeatureError
  const FeatureNode& node(const std::string& id) const { return nodes_[index_of(id)]; }

  /// Feature ids in document order (root first).
  std::vector<std::string> feature_ids() const;
  /// Feature ids sorted lexicographically.
  std::vector<std::string> sorted_feature_ids() const;

 private:
  friend class Builder;
  std::string name_;
  std::vector<FeatureNode> nodes_;  // nodes_[0] is the root
  std::vector<FeatureGroup> groups_;
  std::vector<BoolExpr> constraints_;
  std::map<std::string, int> index_;
};

class FeatureModel::Builder {
 public:
  explicit Builder(std::string model_name);

  Builder& root(const std::string& id);
  Builder& child(const std::string& parent, const std::string& id, ChildKind kind);
  /// Declares a group and its member features in one go; members must be new ids.
  Builder& group(const std::string& parent, GroupKind kind,
                 const std::vector<std::string>& member_ids);
  Builder& constraint(BoolExpr expr);

  /// Validates the tree (unique ids, group arity, constraint references)
  /// and yields the finished model. Throws ParseError on violations.
  FeatureModel build();

 private:
  int add_node(const std::string& id, int parent, ChildKind kind, int group);
  FeatureModel fm_;
  bool has_root_ = false;
};

/// Default brute-force bound: models with more than this many features are
/// rejected by the enumeration-based analyses (2^20 candidate subsets).
inline constexpr std::size_t kDefaultMaxBruteForceFeatures = 20;

/// Unlimited cap sentinel for enumerate_configurations.
inline constexpr std::size_t kNoCap = static_cast<std::size_t>(-1);

/// True iff cfg satisfies every tree, group, and cross-tree rule.
/// Throws UnknownFeatureError if cfg mentions an id not in the model.
bool is_valid(const FeatureModel& fm, const Configuration& cfg);

/// All valid configurations, sorted lexicographically by sorted id list.
/// Throws CapExceededError if more than `cap` configurations exist and
/// BoundExceededError if the model exceeds the brute-force bound.
std::vector<Configuration> enumerate_configurations(
    const FeatureModel& fm, std::size_t cap = kNoCap,
    std::size_t max_features = kDefaultMaxBruteForceFeatures);

std::size_t count_configurations(
    const FeatureModel& fm,
    std::size_t max_features = kDefaultMaxBruteForceFeatures);

bool satisfiable(const FeatureModel& fm,
                 std::size_t max_features = kDefaultMaxBruteForceFeatures);

enum class FmCriterion { AllFeaturesSelected, AllFeaturesUnselected };

/// Features whose absence occurs in at least one valid configuration.
std::vector<std::string> deselectable_features(
    const FeatureModel& fm,
    std::size_t max_features = kDefaultMaxBruteForceFeatures);

/// Derives a small variant set jointly satisfying the requested criteria via
/// greedy obligation cover followed by redundancy elimination. The result is
/// sorted and minimal in the sense that no element can be dropped without
/// breaking a criterion. Throws UnsatisfiableError on unsatisfiable models.
std::vector<Configuration> derive_variants(
    const FeatureModel& fm, const std::set<FmCriterion>& criteria,
    std::size_t max_features = kDefaultMaxBruteForceFeatures);

/// Post-check used by tests and pipelines: do these configurations jointly
/// satisfy the criteria? All configurations must be valid.
bool criteria_satisfied(const FeatureModel& fm,
                        const std::set<FmCriterion>& criteria,
                        const std::vector<Configuration>& configs,
                        std::size_t max_features = kDefaultMaxBruteForceFeatures);

/// Name of the 0/1 guard variable a feature becomes during enrichment:
/// the feature id with its first character lowercased.
std::string feature_variable_name(const std::string& feature_id);

}  // namespace pltgen
