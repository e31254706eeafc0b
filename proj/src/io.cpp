#include "pltgen/io.hpp"

#include <fstream>
#include <sstream>

#include "pltgen/errors.hpp"

namespace pltgen {

namespace {

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const ordered_json& expect(const ordered_json& j, const char* key,
                           const std::string& location) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string("missing field '") + key + "'", location);
  return *it;
}

std::string expect_string(const ordered_json& j, const char* key,
                          const std::string& location) {
  const auto& v = expect(j, key, location);
  if (!v.is_string())
    throw ParseError(std::string("field '") + key + "' must be a string", location);
  return v.get<std::string>();
}

bool truthy(const ordered_json& v, const std::string& location) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    auto n = v.get<int>();
    if (n == 0 || n == 1) return n == 1;
  }
  throw ParseError("expected 0/1 or boolean", location);
}

}  // namespace

BoolExpr expr_from_json(const ordered_json& j, const std::string& location) {
  if (!j.is_object())
    throw ParseError("expression must be an object", location);
  std::string op = expect_string(j, "op", location);
  if (op == "var") return BoolExpr::var(expect_string(j, "name", location));
  if (op == "const") return BoolExpr::constant(truthy(expect(j, "value", location), location));

  const auto& args = expect(j, "args", location);
  if (!args.is_array())
    throw ParseError("'args' must be an array", location);
  std::vector<BoolExpr> parsed;
  for (std::size_t i = 0; i < args.size(); ++i)
    parsed.push_back(expr_from_json(args[i], location + "/args/" + std::to_string(i)));

  auto arity = [&](std::size_t n) {
    if (parsed.size() != n)
      throw ParseError("operator '" + op + "' expects " + std::to_string(n) +
                           " arguments",
                       location);
  };
  if (op == "not") {
    arity(1);
    return BoolExpr::negation(std::move(parsed[0]));
  }
  if (op == "and" || op == "or") {
    if (parsed.empty())
      throw ParseError("operator '" + op + "' expects at least one argument", location);
    return op == "and" ? BoolExpr::conjunction(std::move(parsed))
                       : BoolExpr::disjunction(std::move(parsed));
  }
  if (op == "implies" || op == "requires" || op == "excludes") {
    arity(2);
    if (op == "implies")
      return BoolExpr::implication(std::move(parsed[0]), std::move(parsed[1]));
    if (op == "requires")
      return BoolExpr::requires_sugar(std::move(parsed[0]), std::move(parsed[1]));
    return BoolExpr::excludes_sugar(std::move(parsed[0]), std::move(parsed[1]));
  }
  throw ParseError("unknown operator '" + op + "'", location);
}

ordered_json expr_to_json(const BoolExpr& e) {
  ordered_json j;
  switch (e.op) {
    case BoolOp::Const:
      j["op"] = "const";
      j["value"] = e.value;
      return j;
    case BoolOp::Var:
      j["op"] = "var";
      j["name"] = e.name;
      return j;
    case BoolOp::Not: j["op"] = "not"; break;
    case BoolOp::And: j["op"] = "and"; break;
    case BoolOp::Or: j["op"] = "or"; break;
    case BoolOp::Implies: j["op"] = "implies"; break;
    case BoolOp::Requires: j["op"] = "requires"; break;
    case BoolOp::Excludes: j["op"] = "excludes"; break;
  }
  j["args"] = ordered_json::array();
  for (const auto& a : e.args) j["args"].push_back(expr_to_json(a));
  return j;
}

// --- feature model ----------------------------------------------------------

namespace {

void parse_feature_contents(FeatureModel::Builder& b, const ordered_json& node,
                            const std::string& id, const std::string& location);

// A feature reference is either a bare id (leaf) or a full node object.
std::string feature_ref_id(const ordered_json& ref, const std::string& location) {
  if (ref.is_string()) return ref.get<std::string>();
  if (ref.is_object()) return expect_string(ref, "id", location);
  throw ParseError("feature reference must be an id or a node object", location);
}

void parse_feature_ref_contents(FeatureModel::Builder& b, const ordered_json& ref,
                                const std::string& id, const std::string& location) {
  if (ref.is_object()) parse_feature_contents(b, ref, id, location);
}

void parse_feature_contents(FeatureModel::Builder& b, const ordered_json& node,
                            const std::string& id, const std::string& location) {
  if (auto it = node.find("children"); it != node.end()) {
    if (!it->is_array()) throw ParseError("'children' must be an array", location);
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string loc = location + "/children/" + std::to_string(i);
      const auto& link = (*it)[i];
      if (!link.is_object()) throw ParseError("child link must be an object", loc);
      const auto& ref = expect(link, "feature", loc);
      std::string kind = expect_string(link, "kind", loc);
      ChildKind ck;
      if (kind == "mandatory") ck = ChildKind::Mandatory;
      else if (kind == "optional") ck = ChildKind::Optional;
      else throw ParseError("child kind must be 'mandatory' or 'optional'", loc);
      std::string child_id = feature_ref_id(ref, loc);
      b.child(id, child_id, ck);
      parse_feature_ref_contents(b, ref, child_id, loc);
    }
  }
  auto parse_groups = [&](const char* key, GroupKind gk) {
    auto it = node.find(key);
    if (it == node.end()) return;
    if (!it->is_array()) throw ParseError(std::string("'") + key + "' must be an array", location);
    for (std::size_t g = 0; g < it->size(); ++g) {
      std::string loc = location + "/" + key + "/" + std::to_string(g);
      const auto& members = (*it)[g];
      if (!members.is_array()) throw ParseError("group must be an array of features", loc);
      std::vector<std::string> ids;
      for (const auto& ref : members) ids.push_back(feature_ref_id(ref, loc));
      b.group(id, gk, ids);
      for (std::size_t m = 0; m < members.size(); ++m)
        parse_feature_ref_contents(b, members[m], ids[m],
                                   loc + "/" + std::to_string(m));
    }
  };
  parse_groups("orGroups", GroupKind::Or);
  parse_groups("altGroups", GroupKind::Alternative);
}

}  // namespace

FeatureModel parse_feature_model(const std::string& text) {
  ordered_json j = parse_json(text);
  if (!j.is_object()) throw ParseError("feature model document must be an object");
  FeatureModel::Builder b(expect_string(j, "name", ""));
  const auto& root = expect(j, "root", "");
  if (!root.is_object()) throw ParseError("'root' must be a node object", "/root");
  std::string root_id = expect_string(root, "id", "/root");
  b.root(root_id);
  parse_feature_contents(b, root, root_id, "/root");
  if (auto it = j.find("constraints"); it != j.end()) {
    if (!it->is_array()) throw ParseError("'constraints' must be an array", "/constraints");
    for (std::size_t i = 0; i < it->size(); ++i)
      b.constraint(expr_from_json((*it)[i], "/constraints/" + std::to_string(i)));
  }
  return b.build();
}

namespace {

ordered_json feature_node_to_json(const FeatureModel& fm, int idx);

ordered_json feature_ref_to_json(const FeatureModel& fm, int idx) {
  const auto& n = fm.nodes()[idx];
  if (n.children.empty()) return n.id;
  return feature_node_to_json(fm, idx);
}

ordered_json feature_node_to_json(const FeatureModel& fm, int idx) {
  const auto& n = fm.nodes()[idx];
  ordered_json j;
  j["id"] = n.id;
  ordered_json children = ordered_json::array();
  for (int c : n.children) {
    const auto& cn = fm.nodes()[c];
    if (cn.kind != ChildKind::Mandatory && cn.kind != ChildKind::Optional) continue;
    ordered_json link;
    link["feature"] = feature_ref_to_json(fm, c);
    link["kind"] = cn.kind == ChildKind::Mandatory ? "mandatory" : "optional";
    children.push_back(std::move(link));
  }
  if (!children.empty()) j["children"] = std::move(children);
  ordered_json or_groups = ordered_json::array();
  ordered_json alt_groups = ordered_json::array();
  for (const auto& g : fm.groups()) {
    if (g.parent != idx) continue;
    ordered_json members = ordered_json::array();
    for (int m : g.members) members.push_back(feature_ref_to_json(fm, m));
    (g.kind == GroupKind::Or ? or_groups : alt_groups).push_back(std::move(members));
  }
  if (!or_groups.empty()) j["orGroups"] = std::move(or_groups);
  if (!alt_groups.empty()) j["altGroups"] = std::move(alt_groups);
  return j;
}

}  // namespace

ordered_json feature_model_to_json(const FeatureModel& fm) {
  ordered_json j;
  j["name"] = fm.name();
  j["root"] = feature_node_to_json(fm, 0);
  ordered_json constraints = ordered_json::array();
  for (const auto& c : fm.constraints()) constraints.push_back(expr_to_json(c));
  j["constraints"] = std::move(constraints);
  return j;
}

// --- state machine ----------------------------------------------------------

namespace {

void parse_state_node(StateMachine::Builder& b, const ordered_json& node,
                      const std::string& parent, const std::string& location,
                      std::vector<std::pair<std::string, std::string>>& initial_subs) {
  if (!node.is_object()) throw ParseError("state must be an object", location);
  std::string id = expect_string(node, "id", location);
  bool final_state = false;
  if (auto it = node.find("final"); it != node.end())
    final_state = truthy(*it, location + "/final");
  b.state(id, parent, final_state);

  std::string kind = "simple";
  if (auto it = node.find("kind"); it != node.end()) {
    if (!it->is_string()) throw ParseError("'kind' must be a string", location);
    kind = it->get<std::string>();
  }
  if (kind != "simple" && kind != "composite")
    throw ParseError("state kind must be 'simple' or 'composite'", location);

  if (auto it = node.find("substates"); it != node.end()) {
    if (kind != "composite")
      throw ParseError("only composite states may declare substates", location);
    if (!it->is_array()) throw ParseError("'substates' must be an array", location);
    for (std::size_t i = 0; i < it->size(); ++i)
      parse_state_node(b, (*it)[i], id, location + "/substates/" + std::to_string(i),
                       initial_subs);
  }
  if (kind == "composite")
    initial_subs.emplace_back(id, expect_string(node, "initialSubstate", location));
}

}  // namespace

StateMachine parse_state_machine(const std::string& text) {
  ordered_json j = parse_json(text);
  if (!j.is_object()) throw ParseError("state machine document must be an object");
  StateMachine::Builder b(expect_string(j, "name", ""));

  const auto& states = expect(j, "states", "");
  if (!states.is_array()) throw ParseError("'states' must be an array", "/states");
  std::vector<std::pair<std::string, std::string>> initial_subs;
  for (std::size_t i = 0; i < states.size(); ++i)
    parse_state_node(b, states[i], "", "/states/" + std::to_string(i), initial_subs);
  for (const auto& [comp, sub] : initial_subs) b.initial_substate(comp, sub);
  b.initial(expect_string(j, "initial", ""));

  if (auto it = j.find("variables"); it != j.end()) {
    if (!it->is_array()) throw ParseError("'variables' must be an array", "/variables");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string loc = "/variables/" + std::to_string(i);
      const auto& v = (*it)[i];
      if (!v.is_object()) throw ParseError("variable must be an object", loc);
      std::optional<bool> init;
      if (auto vi = v.find("initial"); vi != v.end()) init = truthy(*vi, loc);
      b.variable(expect_string(v, "name", loc), init);
    }
  }

  const auto& transitions = expect(j, "transitions", "");
  if (!transitions.is_array())
    throw ParseError("'transitions' must be an array", "/transitions");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    std::string loc = "/transitions/" + std::to_string(i);
    const auto& t = transitions[i];
    if (!t.is_object()) throw ParseError("transition must be an object", loc);
    std::optional<std::string> trigger;
    if (auto it = t.find("trigger"); it != t.end()) {
      if (!it->is_string()) throw ParseError("'trigger' must be a string", loc);
      trigger = it->get<std::string>();
    }
    std::optional<BoolExpr> guard;
    if (auto it = t.find("guard"); it != t.end())
      guard = expr_from_json(*it, loc + "/guard");
    std::vector<std::string> tags;
    if (auto it = t.find("tags"); it != t.end()) {
      if (!it->is_array()) throw ParseError("'tags' must be an array", loc);
      for (const auto& tag : *it) tags.push_back(tag.get<std::string>());
    }
    b.transition(expect_string(t, "id", loc), expect_string(t, "source", loc),
                 expect_string(t, "target", loc), trigger, guard, tags);
  }

  if (auto it = j.find("admissible"); it != j.end())
    b.admissible(expr_from_json(*it, "/admissible"));
  return b.build();
}

namespace {

ordered_json state_to_json(const StateMachine& sm, int idx) {
  const auto& s = sm.states()[idx];
  ordered_json j;
  j["id"] = s.id;
  if (s.composite) {
    j["kind"] = "composite";
    j["initialSubstate"] = sm.states()[s.initial_substate].id;
    ordered_json subs = ordered_json::array();
    for (int sub : s.substates) subs.push_back(state_to_json(sm, sub));
    j["substates"] = std::move(subs);
  }
  if (s.final_state) j["final"] = true;
  return j;
}

}  // namespace

ordered_json state_machine_to_json(const StateMachine& sm) {
  ordered_json j;
  j["name"] = sm.name();
  j["initial"] = sm.initial_id();
  ordered_json states = ordered_json::array();
  for (int i = 0; i < static_cast<int>(sm.states().size()); ++i)
    if (sm.states()[i].parent < 0) states.push_back(state_to_json(sm, i));
  j["states"] = std::move(states);
  ordered_json vars = ordered_json::array();
  for (const auto& v : sm.variables()) {
    ordered_json vj;
    vj["name"] = v.name;
    if (v.initial) vj["initial"] = *v.initial ? 1 : 0;
    vars.push_back(std::move(vj));
  }
  j["variables"] = std::move(vars);
  ordered_json transitions = ordered_json::array();
  for (const auto& t : sm.transitions()) {
    ordered_json tj;
    tj["id"] = t.id;
    tj["source"] = sm.states()[t.source].id;
    tj["target"] = sm.states()[t.target].id;
    if (t.trigger) tj["trigger"] = *t.trigger;
    if (t.guard) tj["guard"] = expr_to_json(*t.guard);
    if (!t.tags.empty()) tj["tags"] = t.tags;
    if (t.origin != t.id) tj["origin"] = t.origin;
    transitions.push_back(std::move(tj));
  }
  j["transitions"] = std::move(transitions);
  if (sm.admissible()) j["admissible"] = expr_to_json(*sm.admissible());
  return j;
}

// --- mapping ----------------------------------------------------------------

MappingModel parse_mapping(const std::string& text, const FeatureModel& fm,
                           const StateMachine& sm) {
  ordered_json j = parse_json(text);
  if (!j.is_object()) throw ParseError("mapping document must be an object");
  MappingModel::Builder b(fm, sm);
  if (auto it = j.find("entries"); it != j.end()) {
    if (!it->is_array()) throw ParseError("'entries' must be an array", "/entries");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string loc = "/entries/" + std::to_string(i);
      const auto& e = (*it)[i];
      if (!e.is_object()) throw ParseError("entry must be an object", loc);
      BoolExpr presence = expr_from_json(expect(e, "presence", loc), loc + "/presence");
      const auto& elements = expect(e, "elements", loc);
      if (!elements.is_array()) throw ParseError("'elements' must be an array", loc);
      std::vector<std::string> ids;
      for (const auto& el : elements) ids.push_back(el.get<std::string>());
      b.entry(std::move(presence), ids);
    }
  }
  return b.build();
}

ordered_json mapping_to_json(const MappingModel& map) {
  ordered_json j;
  ordered_json entries = ordered_json::array();
  for (const auto& e : map.entries()) {
    ordered_json ej;
    ej["presence"] = expr_to_json(e.presence);
    ej["elements"] = e.elements;
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

// --- suites ------------------------------------------------------------------

namespace {

ordered_json prolog_to_json(const std::map<std::string, bool>& prolog) {
  ordered_json j = ordered_json::object();
  for (const auto& [var, value] : prolog) j[var] = value ? 1 : 0;
  return j;
}

ordered_json coverage_to_json(const CoverageReport& coverage) {
  ordered_json j;
  j["targets"] = coverage.targets;
  j["covered"] = coverage.covered;
  j["ratio"] = coverage.ratio;
  ordered_json hits = ordered_json::object();
  for (const auto& [id, n] : coverage.hit_counts) hits[id] = n;
  j["hitCounts"] = std::move(hits);
  return j;
}

CoverageReport coverage_from_json(const ordered_json& j, const std::string& location) {
  CoverageReport c;
  for (const auto& t : expect(j, "targets", location)) c.targets.push_back(t.get<std::string>());
  for (const auto& t : expect(j, "covered", location)) c.covered.push_back(t.get<std::string>());
  c.ratio = expect(j, "ratio", location).get<double>();
  for (const auto& [id, n] : expect(j, "hitCounts", location).items())
    c.hit_counts[id] = n.get<int>();
  return c;
}

}  // namespace

ordered_json suite_to_json(const TestSuite& suite, std::optional<GenStrategy> strategy) {
  ordered_json j;
  j["model"] = suite.source_model;
  if (strategy) j["strategy"] = strategy_name(*strategy);
  ordered_json cases = ordered_json::array();
  for (const auto& c : suite.cases) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["prolog"] = prolog_to_json(c.prolog);
    cj["events"] = c.events;
    ordered_json trace = ordered_json::array();
    for (const auto& s : c.expected_trace.steps) {
      ordered_json sj;
      sj["event"] = s.event;
      sj["transition"] = s.transition;
      sj["state"] = s.state;
      trace.push_back(std::move(sj));
    }
    cj["trace"] = std::move(trace);
    cases.push_back(std::move(cj));
  }
  j["cases"] = std::move(cases);
  j["coverage"] = coverage_to_json(suite.coverage);
  return j;
}

SuiteInput parse_suite_input(const std::string& text) {
  ordered_json j = parse_json(text);
  if (!j.is_object()) throw ParseError("suite document must be an object");
  SuiteInput input;
  input.model = expect_string(j, "model", "");
  if (auto it = j.find("eventAliases"); it != j.end()) {
    if (!it->is_object()) throw ParseError("'eventAliases' must be an object", "/eventAliases");
    for (const auto& [from, to] : it->items())
      input.aliases[from] = to.get<std::string>();
  }
  const auto& cases = expect(j, "cases", "");
  if (!cases.is_array()) throw ParseError("'cases' must be an array", "/cases");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    std::string loc = "/cases/" + std::to_string(i);
    const auto& c = cases[i];
    SuiteInputCase sic;
    sic.id = expect_string(c, "id", loc);
    for (const auto& e : expect(c, "events", loc)) {
      std::string event = e.get<std::string>();
      auto alias = input.aliases.find(event);
      sic.events.push_back(alias == input.aliases.end() ? event : alias->second);
    }
    if (auto it = c.find("prolog"); it != c.end()) {
      if (!it->is_object()) throw ParseError("'prolog' must be an object", loc);
      for (const auto& [var, value] : it->items())
        sic.prolog[var] = truthy(value, loc + "/prolog");
    }
    if (auto it = c.find("configuration"); it != c.end()) {
      Configuration cfg;
      for (const auto& f : *it) cfg.selected.insert(f.get<std::string>());
      sic.configuration = std::move(cfg);
    }
    input.cases.push_back(std::move(sic));
  }
  return input;
}

// --- plans --------------------------------------------------------------------

namespace {

ordered_json configuration_to_json(const Configuration& cfg) {
  return ordered_json(cfg.sorted_ids());
}

TestSuite suite_from_json(const ordered_json& j, const std::string& location) {
  TestSuite suite;
  suite.source_model = expect_string(j, "model", location);
  for (const auto& c : expect(j, "cases", location)) {
    TestCase tc;
    tc.id = expect_string(c, "id", location);
    for (const auto& e : expect(c, "events", location))
      tc.events.push_back(e.get<std::string>());
    if (auto it = c.find("prolog"); it != c.end())
      for (const auto& [var, value] : it->items())
        tc.prolog[var] = truthy(value, location);
    if (auto it = c.find("trace"); it != c.end())
      for (const auto& s : *it)
        tc.expected_trace.steps.push_back({s.at("event").get<std::string>(),
                                           s.at("transition").get<std::string>(),
                                           s.at("state").get<std::string>()});
    suite.cases.push_back(std::move(tc));
  }
  suite.coverage = coverage_from_json(expect(j, "coverage", location), location);
  return suite;
}

}  // namespace

ordered_json plan_to_json(const ProductLineTestPlan& plan) {
  ordered_json j;
  j["pipeline"] = pipeline_kind_name(plan.kind);
  j["featureModel"] = plan.feature_model_name;
  j["model"] = plan.model_name;
  j["strategy"] = strategy_name(plan.strategy);
  if (plan.kind == PipelineKind::TopDown) {
    ordered_json criteria = ordered_json::array();
    for (const auto& c : plan.criteria) criteria.push_back(criterion_name(c));
    j["criteria"] = std::move(criteria);
  }
  ordered_json features;
  features["all"] = plan.all_features;
  features["deselectable"] = plan.deselectable;
  j["features"] = std::move(features);

  ordered_json variants = ordered_json::array();
  for (const auto& v : plan.variants) {
    ordered_json vj;
    vj["configuration"] = configuration_to_json(v.config);
    if (!v.prune_warnings.empty()) vj["pruneWarnings"] = v.prune_warnings;
    vj["suite"] = suite_to_json(v.suite);
    variants.push_back(std::move(vj));
  }
  j["variants"] = std::move(variants);

  if (plan.kind == PipelineKind::BottomUp) {
    if (plan.suite) j["enrichedSuite"] = suite_to_json(*plan.suite);
    ordered_json extracted = ordered_json::array();
    for (const auto& cc : plan.extracted) {
      ordered_json ej;
      ej["case"] = cc.case_id;
      ej["configuration"] = configuration_to_json(cc.config);
      extracted.push_back(std::move(ej));
    }
    j["extractedConfigurations"] = std::move(extracted);
  }

  PlanMetrics m = plan_metrics(plan);
  ordered_json mj;
  mj["variants"] = m.variants;
  mj["cases"] = m.cases;
  mj["events"] = m.events;
  mj["targets"] = m.targets;
  mj["covered"] = m.covered;
  mj["transitionRatio"] = m.transition_ratio;
  mj["featureSelectedRatio"] = m.feature_selected_ratio;
  mj["featureUnselectedRatio"] = m.feature_unselected_ratio;
  mj["redundancy"] = m.redundancy;
  j["metrics"] = std::move(mj);
  return j;
}

ProductLineTestPlan parse_plan(const std::string& text) {
  ordered_json j = parse_json(text);
  if (!j.is_object()) throw ParseError("plan document must be an object");
  ProductLineTestPlan plan;
  std::string pipeline = expect_string(j, "pipeline", "");
  if (pipeline == "top-down") plan.kind = PipelineKind::TopDown;
  else if (pipeline == "bottom-up") plan.kind = PipelineKind::BottomUp;
  else throw ParseError("unknown pipeline '" + pipeline + "'");
  plan.feature_model_name = expect_string(j, "featureModel", "");
  plan.model_name = expect_string(j, "model", "");
  std::string strategy = expect_string(j, "strategy", "");
  if (strategy == "greedy") plan.strategy = GenStrategy::Greedy;
  else if (strategy == "fewest-cases") plan.strategy = GenStrategy::FewestCases;
  else throw ParseError("unknown strategy '" + strategy + "'");
  if (auto it = j.find("criteria"); it != j.end())
    for (const auto& c : *it) {
      std::string name = c.get<std::string>();
      if (name == "all-selected") plan.criteria.insert(FmCriterion::AllFeaturesSelected);
      else if (name == "all-unselected") plan.criteria.insert(FmCriterion::AllFeaturesUnselected);
      else throw ParseError("unknown criterion '" + name + "'");
    }
  const auto& features = expect(j, "features", "");
  for (const auto& f : expect(features, "all", "/features"))
    plan.all_features.push_back(f.get<std::string>());
  for (const auto& f : expect(features, "deselectable", "/features"))
    plan.deselectable.push_back(f.get<std::string>());

  for (const auto& vj : expect(j, "variants", "")) {
    VariantEntry v;
    for (const auto& f : expect(vj, "configuration", "/variants"))
      v.config.selected.insert(f.get<std::string>());
    if (auto it = vj.find("pruneWarnings"); it != vj.end())
      for (const auto& w : *it) v.prune_warnings.push_back(w.get<std::string>());
    v.suite = suite_from_json(expect(vj, "suite", "/variants"), "/variants");
    plan.variants.push_back(std::move(v));
  }
  if (auto it = j.find("enrichedSuite"); it != j.end())
    plan.suite = suite_from_json(*it, "/enrichedSuite");
  if (auto it = j.find("extractedConfigurations"); it != j.end())
    for (const auto& ej : *it) {
      CaseConfig cc;
      cc.case_id = expect_string(ej, "case", "/extractedConfigurations");
      for (const auto& f : expect(ej, "configuration", "/extractedConfigurations"))
        cc.config.selected.insert(f.get<std::string>());
      plan.extracted.push_back(std::move(cc));
    }
  return plan;
}

ordered_json report_to_json(const ComparisonReport& report) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& m : report.rows) {
    ordered_json r;
    r["plan"] = m.label;
    r["variants"] = m.variants;
    r["cases"] = m.cases;
    r["events"] = m.events;
    r["targets"] = m.targets;
    r["covered"] = m.covered;
    r["transitionRatio"] = m.transition_ratio;
    r["featureSelectedRatio"] = m.feature_selected_ratio;
    r["featureUnselectedRatio"] = m.feature_unselected_ratio;
    r["redundancy"] = m.redundancy;
    rows.push_back(std::move(r));
  }
  j["plans"] = std::move(rows);
  return j;
}

std::string canonical_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path + "'");
  out << content;
}

}  // namespace pltgen
