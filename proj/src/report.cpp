#include "pltgen/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "pltgen/errors.hpp"

namespace pltgen {

namespace {

const std::vector<const TestSuite*> plan_suites(const ProductLineTestPlan& plan) {
  std::vector<const TestSuite*> suites;
  if (plan.kind == PipelineKind::BottomUp) {
    if (plan.suite) suites.push_back(&*plan.suite);
  } else {
    for (const auto& v : plan.variants) suites.push_back(&v.suite);
  }
  return suites;
}

}  // namespace

PlanMetrics plan_metrics(const ProductLineTestPlan& plan) {
  PlanMetrics m;
  m.label = pipeline_kind_name(plan.kind) + "/" + strategy_name(plan.strategy);
  m.variants = plan.variants.size();

  std::map<std::string, std::size_t> hits;
  for (const auto* suite : plan_suites(plan)) {
    m.cases += suite->cases.size();
    for (const auto& c : suite->cases) m.events += c.events.size();
    m.targets += suite->coverage.targets.size();
    m.covered += suite->coverage.covered.size();
    for (const auto& [id, n] : suite->coverage.hit_counts)
      hits[id] += static_cast<std::size_t>(n);
  }
  m.transition_ratio =
      m.targets == 0 ? 0.0
                     : static_cast<double>(m.covered) / static_cast<double>(m.targets);
  for (const auto& [id, n] : hits)
    if (n > 1) m.redundancy += n - 1;

  if (!plan.variants.empty()) {
    std::size_t selected = 0;
    for (const auto& f : plan.all_features)
      for (const auto& v : plan.variants)
        if (v.config.contains(f)) {
          ++selected;
          break;
        }
    m.feature_selected_ratio = plan.all_features.empty()
                                   ? 1.0
                                   : static_cast<double>(selected) /
                                         static_cast<double>(plan.all_features.size());
    std::size_t unselected = 0;
    for (const auto& f : plan.deselectable)
      for (const auto& v : plan.variants)
        if (!v.config.contains(f)) {
          ++unselected;
          break;
        }
    m.feature_unselected_ratio = plan.deselectable.empty()
                                     ? 1.0
                                     : static_cast<double>(unselected) /
                                           static_cast<double>(plan.deselectable.size());
  }
  return m;
}

ComparisonReport compare(const std::vector<ProductLineTestPlan>& plans) {
  for (const auto& p : plans) {
    if (p.feature_model_name != plans.front().feature_model_name ||
        p.model_name != plans.front().model_name)
      throw ValidationError("plans stem from different models ('" +
                            p.feature_model_name + "'/'" + p.model_name +
                            "' vs '" + plans.front().feature_model_name + "'/'" +
                            plans.front().model_name + "')");
  }
  ComparisonReport report;
  for (const auto& p : plans) report.rows.push_back(plan_metrics(p));
  return report;
}

std::string render_table(const ComparisonReport& report, bool color) {
  std::vector<std::string> headers{"plan",     "variants", "cases",
                                   "events",   "coverage", "feat-sel",
                                   "feat-unsel", "redundancy"};
  auto fmt_ratio = [](double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r);
    return std::string(buf);
  };

  std::vector<std::vector<std::string>> rows;
  for (const auto& m : report.rows) {
    rows.push_back({m.label, std::to_string(m.variants), std::to_string(m.cases),
                    std::to_string(m.events),
                    std::to_string(m.covered) + "/" + std::to_string(m.targets) +
                        " (" + fmt_ratio(m.transition_ratio) + ")",
                    fmt_ratio(m.feature_selected_ratio),
                    fmt_ratio(m.feature_unselected_ratio),
                    std::to_string(m.redundancy)});
  }

  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }

  auto line = [&](const std::vector<std::string>& cells, bool highlight) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::string cell = cells[c];
      cell.resize(width[c], ' ');
      if (c) out += "  ";
      if (highlight && c == 4) out += "\033[32m" + cell + "\033[0m";
      else out += cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };

  std::string out = line(headers, false);
  std::string rule;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    if (c) rule += "  ";
    rule += std::string(width[c], '-');
  }
  out += rule + "\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    out += line(rows[i], color && report.rows[i].transition_ratio == 1.0);
  return out;
}

}  // namespace pltgen
