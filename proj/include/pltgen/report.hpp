#pragma once

#include <string>
#include <vector>

#include "pltgen/pipelines.hpp"

namespace pltgen {

/// Aggregate metrics of one plan, comparable across pipelines.
struct PlanMetrics {
  std::string label;            // pipeline + strategy
  std::size_t variants = 0;
  std::size_t cases = 0;
  std::size_t events = 0;       // total event calls across all cases
  std::size_t targets = 0;
  std::size_t covered = 0;
  double transition_ratio = 0.0;
  double feature_selected_ratio = 0.0;    // features selected in >= 1 variant
  double feature_unselected_ratio = 0.0;  // deselectable unselected in >= 1 variant
  std::size_t redundancy = 0;   // sum over targets of max(0, hits - 1)
};

struct ComparisonReport {
  std::vector<PlanMetrics> rows;
};

PlanMetrics plan_metrics(const ProductLineTestPlan& plan);

/// Pure fold over the plans' contents. All plans must stem from the same
/// feature model and 150% machine; otherwise ValidationError.
ComparisonReport compare(const std::vector<ProductLineTestPlan>& plans);

/// Aligned-column table. With color enabled, full coverage is highlighted.
std::string render_table(const ComparisonReport& report, bool color = false);

}  // namespace pltgen
