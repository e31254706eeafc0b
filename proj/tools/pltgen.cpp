#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pltgen/errors.hpp"
#include "pltgen/io.hpp"
#include "pltgen/pipelines.hpp"
#include "pltgen/report.hpp"

namespace {

using namespace pltgen;

bool color_enabled() {
  const char* mode = std::getenv("PLTGEN_COLOR");
  if (mode) {
    std::string m = mode;
    if (m == "always") return true;
    if (m == "never") return false;
  }
  return isatty(STDOUT_FILENO) != 0;
}

void diagnostic(const std::string& file, const std::string& error) {
  ordered_json j;
  j["file"] = file;
  j["error"] = error;
  std::cerr << j.dump() << "\n";
}

struct Paths {
  std::string fm, sm, map;
};

struct LoadedModels {
  FeatureModel fm;
  StateMachine sm;
  MappingModel map;
};

LoadedModels load_models(const Paths& paths) {
  auto fm = parse_feature_model(read_file(paths.fm));
  auto sm = parse_state_machine(read_file(paths.sm));
  auto map = parse_mapping(read_file(paths.map), fm, sm);
  return {std::move(fm), std::move(sm), std::move(map)};
}

std::string config_line(const Configuration& cfg) {
  std::string line;
  for (const auto& id : cfg.sorted_ids()) {
    if (!line.empty()) line += ", ";
    line += id;
  }
  return line;
}

std::set<FmCriterion> parse_criteria(const std::vector<std::string>& names) {
  if (names.empty())
    return {FmCriterion::AllFeaturesSelected, FmCriterion::AllFeaturesUnselected};
  std::set<FmCriterion> criteria;
  for (const auto& n : names)
    criteria.insert(n == "all-selected" ? FmCriterion::AllFeaturesSelected
                                        : FmCriterion::AllFeaturesUnselected);
  return criteria;
}

int cmd_validate(const Paths& paths) {
  bool ok = true;
  std::optional<FeatureModel> fm;
  std::optional<StateMachine> sm;

  try {
    fm = parse_feature_model(read_file(paths.fm));
    if (!satisfiable(*fm)) throw ValidationError("unsatisfiable feature model");
    std::cout << "feature model: OK (" << fm->feature_count() << " features)\n";
  } catch (const Error& e) {
    std::cout << "feature model: ERROR\n";
    diagnostic(paths.fm, e.what());
    ok = false;
  }
  try {
    sm = parse_state_machine(read_file(paths.sm));
    std::cout << "state machine: OK (" << sm->states().size() << " states, "
              << sm->transitions().size() << " transitions)\n";
  } catch (const Error& e) {
    std::cout << "state machine: ERROR\n";
    diagnostic(paths.sm, e.what());
    ok = false;
  }
  if (fm && sm) {
    try {
      auto map = parse_mapping(read_file(paths.map), *fm, *sm);
      std::cout << "mapping: OK (" << map.entries().size() << " entries)\n";
    } catch (const Error& e) {
      std::cout << "mapping: ERROR\n";
      diagnostic(paths.map, e.what());
      ok = false;
    }
  } else {
    std::cout << "mapping: SKIPPED (depends on the documents above)\n";
    diagnostic(paths.map, "not checked: feature model or state machine failed");
    ok = false;
  }
  if (ok) std::cout << "3 documents valid\n";
  return ok ? 0 : 1;
}

int cmd_variants(const std::string& fm_path, const std::vector<std::string>& criteria,
                 bool count, bool enumerate, const std::string& format) {
  auto fm = parse_feature_model(read_file(fm_path));
  if (count) {
    std::cout << count_configurations(fm) << "\n";
    return 0;
  }
  std::vector<Configuration> configs =
      enumerate ? enumerate_configurations(fm)
                : derive_variants(fm, parse_criteria(criteria));
  if (format == "json") {
    ordered_json j = ordered_json::array();
    for (const auto& c : configs) j.push_back(c.sorted_ids());
    std::cout << canonical_dump(j);
  } else {
    for (const auto& c : configs) std::cout << config_line(c) << "\n";
  }
  return 0;
}

int cmd_generate(const Paths& paths, const std::string& pipeline,
                 const std::string& strategy_name_in,
                 const std::vector<std::string>& criteria, bool minimize,
                 const std::string& out_dir, unsigned jobs, bool verbose) {
  auto models = load_models(paths);
  GenStrategy strategy = strategy_name_in == "greedy" ? GenStrategy::Greedy
                                                      : GenStrategy::FewestCases;
  ProductLineTestPlan plan;
  if (pipeline == "top-down") {
    plan = top_down(models.fm, models.sm, models.map, parse_criteria(criteria),
                    strategy, jobs);
  } else {
    plan = bottom_up(models.fm, models.sm, models.map, strategy);
    if (minimize) plan = minimize_variants(plan, models.fm);
  }

  std::filesystem::create_directories(out_dir);
  auto out = [&](const std::string& name) { return out_dir + "/" + name; };
  write_file(out("plan.json"), canonical_dump(plan_to_json(plan)));
  for (std::size_t i = 0; i < plan.variants.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "suite-%03zu.json", i + 1);
    write_file(out(name),
               canonical_dump(suite_to_json(plan.variants[i].suite, strategy)));
  }
  ComparisonReport report = compare({plan});
  write_file(out("report.json"), canonical_dump(report_to_json(report)));
  write_file(out("report.txt"), render_table(report, false));

  if (verbose)
    std::cerr << "wrote plan.json, " << plan.variants.size()
              << " suite file(s), report.json, report.txt to " << out_dir << "\n";
  std::cout << render_table(report, color_enabled());
  return 0;
}

int cmd_check(const std::string& sm_path, const std::string& suite_path,
              const std::string& fm_path, const std::string& map_path,
              const std::string& format) {
  auto sm = parse_state_machine(read_file(sm_path));
  StateMachine flat = flatten(sm);
  if (!fm_path.empty() && !map_path.empty()) {
    auto fm = parse_feature_model(read_file(fm_path));
    auto map = parse_mapping(read_file(map_path), fm, sm);
    flat = flatten(enrich(sm, fm, map));
  }
  SuiteInput input = parse_suite_input(read_file(suite_path));
  std::vector<RawCase> cases;
  std::size_t events = 0;
  for (const auto& c : input.cases) {
    events += c.events.size();
    cases.push_back({c.id, c.events, c.prolog});
  }
  CoverageReport coverage;
  try {
    coverage = check_coverage(flat, cases);
  } catch (const ReplayError& e) {
    diagnostic(suite_path, std::string(e.what()) +
                               (e.case_id.empty() ? "" : " in case '" + e.case_id + "'"));
    return 1;
  }
  if (format == "json") {
    ordered_json j;
    j["model"] = flat.name();
    j["cases"] = input.cases.size();
    j["events"] = events;
    j["coverage"] = ordered_json::object();
    j["coverage"]["targets"] = coverage.targets;
    j["coverage"]["covered"] = coverage.covered;
    j["coverage"]["ratio"] = coverage.ratio;
    ordered_json hits = ordered_json::object();
    for (const auto& [id, n] : coverage.hit_counts) hits[id] = n;
    j["coverage"]["hitCounts"] = std::move(hits);
    std::cout << canonical_dump(j);
  } else {
    std::cout << "cases: " << input.cases.size() << "\n";
    std::cout << "events: " << events << "\n";
    std::cout << "covered: " << coverage.covered.size() << "/" << coverage.targets.size()
              << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", coverage.ratio);
    std::cout << "ratio: " << buf << "\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& plan_paths, const std::string& format) {
  std::vector<ProductLineTestPlan> plans;
  for (const auto& p : plan_paths) plans.push_back(parse_plan(read_file(p)));
  ComparisonReport report = compare(plans);
  if (format == "json")
    std::cout << canonical_dump(report_to_json(report));
  else
    std::cout << render_table(report, color_enabled());
  return 0;
}

int cmd_export_dot(const std::string& sm_path) {
  auto sm = parse_state_machine(read_file(sm_path));
  std::cout << to_dot(sm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pltgen - model-based test generation for product lines"};
  app.require_subcommand(1);
  unsigned long long seed = 0;
  bool verbose = false;
  app.add_option("--seed", seed,
                 "seed for randomized commands (current strategies are deterministic)");
  app.add_flag("-v,--verbose", verbose, "progress notes on standard error");

  Paths paths;
  std::string pipeline, strategy = "fewest-cases", out_dir, format = "table";
  std::string suite_path;
  std::vector<std::string> criteria, plan_paths;
  bool count = false, enumerate = false, minimize = false;
  unsigned jobs = 1;

  auto* validate = app.add_subcommand("validate", "parse and cross-check the three documents");
  validate->add_option("--fm", paths.fm, "feature model document")->required();
  validate->add_option("--sm", paths.sm, "state machine document")->required();
  validate->add_option("--map", paths.map, "mapping document")->required();

  auto* variants = app.add_subcommand("variants", "derive, enumerate, or count configurations");
  variants->add_option("--fm", paths.fm)->required();
  variants->add_option("--criteria", criteria)
      ->check(CLI::IsMember({"all-selected", "all-unselected"}));
  variants->add_flag("--count", count, "print the number of valid configurations");
  variants->add_flag("--enumerate", enumerate, "print every valid configuration");
  variants->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

  auto* generate = app.add_subcommand("generate", "run a pipeline and write plan, suites, report");
  generate->add_option("--fm", paths.fm)->required();
  generate->add_option("--sm", paths.sm)->required();
  generate->add_option("--map", paths.map)->required();
  generate->add_option("--pipeline", pipeline)
      ->check(CLI::IsMember({"top-down", "bottom-up"}))
      ->required();
  generate->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"greedy", "fewest-cases"}));
  generate->add_option("--criteria", criteria)
      ->check(CLI::IsMember({"all-selected", "all-unselected"}));
  generate->add_flag("--minimize-variants", minimize,
                     "merge bottom-up variants with compatible prologs");
  generate->add_option("--out", out_dir, "output directory")->required();
  generate->add_option("--jobs", jobs, "parallel per-variant generation");

  auto* check = app.add_subcommand("check", "replay a suite and report coverage");
  check->add_option("--sm", paths.sm)->required();
  check->add_option("--fm", paths.fm, "with --map: check against the enriched machine");
  check->add_option("--map", paths.map);
  check->add_option("suite", suite_path, "suite document")->required();
  check->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

  auto* report = app.add_subcommand("report", "compare plans");
  report->add_option("--plan", plan_paths, "plan document (repeatable)")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

  auto* export_dot = app.add_subcommand("export-dot", "Graphviz rendering of a machine");
  export_dot->add_option("--sm", paths.sm)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(paths);
    if (variants->parsed())
      return cmd_variants(paths.fm, criteria, count, enumerate, format);
    if (generate->parsed())
      return cmd_generate(paths, pipeline, strategy, criteria, minimize, out_dir,
                          jobs, verbose);
    if (check->parsed())
      return cmd_check(paths.sm, suite_path, paths.fm, paths.map, format);
    if (report->parsed()) return cmd_report(plan_paths, format);
    if (export_dot->parsed()) return cmd_export_dot(paths.sm);
  } catch (const Error& e) {
    diagnostic("", e.what());
    return 1;
  }
  return 2;
}
