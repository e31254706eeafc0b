#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pltgen/feature_model.hpp"
#include "pltgen/mapping.hpp"
#include "pltgen/pipelines.hpp"
#include "pltgen/report.hpp"
#include "pltgen/state_machine.hpp"
#include "pltgen/test_gen.hpp"

namespace pltgen {

using ordered_json = nlohmann::ordered_json;

// --- documents in, ParseError out ---------------------------------------

FeatureModel parse_feature_model(const std::string& text);
StateMachine parse_state_machine(const std::string& text);
MappingModel parse_mapping(const std::string& text, const FeatureModel& fm,
                           const StateMachine& sm);

BoolExpr expr_from_json(const ordered_json& j, const std::string& location);
ordered_json expr_to_json(const BoolExpr& e);

// --- canonical serialization ---------------------------------------------

ordered_json feature_model_to_json(const FeatureModel& fm);
ordered_json state_machine_to_json(const StateMachine& sm);
ordered_json mapping_to_json(const MappingModel& map);
ordered_json suite_to_json(const TestSuite& suite,
                           std::optional<GenStrategy> strategy = std::nullopt);
ordered_json plan_to_json(const ProductLineTestPlan& plan);
ordered_json report_to_json(const ComparisonReport& report);

/// Two-space indent plus trailing newline; byte-stable for golden files.
std::string canonical_dump(const ordered_json& j);

// --- suite input (handwritten or generated) -------------------------------

struct SuiteInputCase {
  std::string id;
  std::vector<std::string> events;                // aliases already applied
  std::map<std::string, bool> prolog;
  std::optional<Configuration> configuration;     // optional metadata
};

struct SuiteInput {
  std::string model;
  std::map<std::string, std::string> aliases;
  std::vector<SuiteInputCase> cases;
};

/// Reads a suite document, applying its eventAliases map to all events.
SuiteInput parse_suite_input(const std::string& text);

/// Reads back a plan written by plan_to_json. Embedded machines are not
/// reconstructed; the result carries enough for reporting.
ProductLineTestPlan parse_plan(const std::string& text);

// --- files -----------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pltgen
