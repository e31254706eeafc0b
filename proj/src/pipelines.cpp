#include "pltgen/pipelines.hpp"

#include <algorithm>
#include <future>
#include <map>

#include "pltgen/errors.hpp"

namespace pltgen {

namespace {

BoolExpr rename_vars(const BoolExpr& e, const std::map<std::string, std::string>& names) {
  if (e.op == BoolOp::Var) {
    auto it = names.find(e.name);
    return BoolExpr::var(it == names.end() ? e.name : it->second);
  }
  BoolExpr out = e;
  for (auto& a : out.args) a = rename_vars(a, names);
  return out;
}

// Feature-model validity expressed over the per-feature guard variables.
BoolExpr validity_over_variables(const FeatureModel& fm,
                                 const std::map<std::string, std::string>& names) {
  const auto& nodes = fm.nodes();
  auto var_of = [&](int idx) { return BoolExpr::var(names.at(nodes[idx].id)); };

  std::vector<BoolExpr> rules;
  rules.push_back(var_of(0));
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    rules.push_back(BoolExpr::implication(var_of(static_cast<int>(i)),
                                          var_of(nodes[i].parent)));
    if (nodes[i].kind == ChildKind::Mandatory)
      rules.push_back(BoolExpr::implication(var_of(nodes[i].parent),
                                            var_of(static_cast<int>(i))));
  }
  for (const auto& g : fm.groups()) {
    std::vector<BoolExpr> members;
    for (int m : g.members) members.push_back(var_of(m));
    rules.push_back(BoolExpr::implication(var_of(g.parent),
                                          BoolExpr::disjunction(members)));
    if (g.kind == GroupKind::Alternative)
      for (std::size_t i = 0; i < g.members.size(); ++i)
        for (std::size_t j = i + 1; j < g.members.size(); ++j)
          rules.push_back(BoolExpr::negation(BoolExpr::conjunction(
              {var_of(g.members[i]), var_of(g.members[j])})));
  }
  for (const auto& c : fm.constraints()) rules.push_back(rename_vars(c, names));
  return BoolExpr::conjunction(std::move(rules));
}

std::map<std::string, std::string> variable_names(const FeatureModel& fm) {
  std::map<std::string, std::string> names;
  std::map<std::string, std::string> reverse;
  for (const auto& id : fm.feature_ids()) {
    std::string v = feature_variable_name(id);
    auto [it, inserted] = reverse.try_emplace(v, id);
    if (!inserted)
      throw ValidationError("features '" + it->second + "' and '" + id +
                            "' map to the same guard variable '" + v + "'");
    names[id] = v;
  }
  return names;
}

std::map<std::string, bool> characteristic_assignment(
    const FeatureModel& fm, const Configuration& cfg,
    const std::map<std::string, std::string>& names) {
  std::map<std::string, bool> a;
  for (const auto& id : fm.feature_ids()) a[names.at(id)] = cfg.contains(id);
  return a;
}

std::string variant_label(const Configuration& cfg) {
  std::string label = "{";
  bool first = true;
  for (const auto& id : cfg.sorted_ids()) {
    if (!first) label += ", ";
    label += id;
    first = false;
  }
  return label + "}";
}

VariantEntry build_variant(const StateMachine& sm150, const MappingModel& map,
                           const Configuration& cfg, GenStrategy strategy) {
  PruneResult pruned = prune(sm150, map, cfg);
  StateMachine flat = flatten(pruned.machine);
  std::map<std::string, bool> fixed;
  for (const auto& v : flat.variables())
    if (v.initial) fixed[v.name] = *v.initial;
  TestSuite suite = generate_all_transitions(flat, fixed, strategy);
  return {cfg, std::move(flat), std::move(suite), std::move(pruned.warnings)};
}

}  // namespace

ProductLineTestPlan top_down(const FeatureModel& fm, const StateMachine& sm150,
                             const MappingModel& map,
                             const std::set<FmCriterion>& criteria,
                             GenStrategy strategy, unsigned jobs) {
  ProductLineTestPlan plan;
  plan.kind = PipelineKind::TopDown;
  plan.feature_model_name = fm.name();
  plan.model_name = sm150.name();
  plan.strategy = strategy;
  plan.criteria = criteria;
  plan.all_features = fm.sorted_feature_ids();
  plan.deselectable = deselectable_features(fm);
  plan.base_model = sm150;
  plan.mapping = map;

  auto configs = derive_variants(fm, criteria);

  auto guarded_build = [&](const Configuration& cfg) {
    try {
      return build_variant(sm150, map, cfg, strategy);
    } catch (const Error& e) {
      throw Error("variant " + variant_label(cfg) + ": " + e.what());
    }
  };

  if (jobs > 1) {
    std::vector<std::future<VariantEntry>> futures;
    for (const auto& cfg : configs)
      futures.push_back(std::async(std::launch::async, guarded_build, cfg));
    for (auto& f : futures) plan.variants.push_back(f.get());
  } else {
    for (const auto& cfg : configs) plan.variants.push_back(guarded_build(cfg));
  }
  return plan;
}

StateMachine enrich(const StateMachine& sm150, const FeatureModel& fm,
                    const MappingModel& map) {
  auto names = variable_names(fm);
  const auto& states = sm150.states();

  std::set<std::string> machine_vars;
  for (const auto& v : sm150.variables()) machine_vars.insert(v.name);
  for (const auto& [feature, var] : names)
    if (machine_vars.count(var))
      throw ValidationError("guard variable '" + var +
                            "' already exists on the machine");

  // Mapped states constrain every transition crossing into their subtree.
  auto in_subtree = [&](int state, int root) {
    for (int s = state; s >= 0; s = states[s].parent)
      if (s == root) return true;
    return false;
  };

  std::vector<std::pair<int, BoolExpr>> guarded_states;  // state idx, presence
  for (int i = 0; i < static_cast<int>(states.size()); ++i) {
    const BoolExpr& p = map.presence_of(states[i].id);
    if (!is_const(p, true)) guarded_states.push_back({i, rename_vars(p, names)});
  }

  StateMachine::Builder b(sm150.name());
  for (const auto& s : states)
    b.state(s.id, s.parent >= 0 ? states[s.parent].id : std::string{}, s.final_state);
  for (const auto& s : states)
    if (s.composite) b.initial_substate(s.id, states[s.initial_substate].id);
  b.initial(sm150.initial_id());
  for (const auto& v : sm150.variables()) b.variable(v.name, v.initial);
  for (const auto& id : fm.feature_ids()) b.variable(names.at(id));
  b.admissible(validity_over_variables(fm, names));

  for (const auto& t : sm150.transitions()) {
    std::vector<BoolExpr> conjuncts;
    if (t.guard) conjuncts.push_back(*t.guard);
    auto add = [&](const BoolExpr& e) {
      if (std::find(conjuncts.begin(), conjuncts.end(), e) == conjuncts.end())
        conjuncts.push_back(e);
    };
    const BoolExpr& own = map.presence_of(t.id);
    if (!is_const(own, true)) add(rename_vars(own, names));
    int entry = sm150.resolve_entry(t.target);
    for (const auto& [state, presence] : guarded_states)
      if (in_subtree(entry, state) && !in_subtree(t.source, state)) add(presence);

    std::optional<BoolExpr> guard;
    if (conjuncts.size() == 1)
      guard = conjuncts[0];
    else if (conjuncts.size() > 1)
      guard = BoolExpr::conjunction(std::move(conjuncts));
    b.transition(t.id, states[t.source].id, states[t.target].id, t.trigger,
                 guard, t.tags, t.origin);
  }
  return b.build();
}

Configuration extract_configuration(const TestCase& test_case,
                                    const FeatureModel& fm) {
  auto names = variable_names(fm);
  std::map<std::string, bool> bound;  // feature id -> required value
  for (const auto& id : fm.feature_ids()) {
    auto it = test_case.prolog.find(names.at(id));
    if (it != test_case.prolog.end()) bound[id] = it->second;
  }

  auto candidates = enumerate_configurations(fm);
  const Configuration* best = nullptr;
  for (const auto& cfg : candidates) {
    bool consistent = true;
    for (const auto& [feature, value] : bound)
      if (cfg.contains(feature) != value) {
        consistent = false;
        break;
      }
    if (!consistent) continue;
    if (!best || cfg.selected.size() < best->selected.size())
      best = &cfg;  // candidates are sorted, so first of a size is lex-least
  }
  if (!best)
    throw ValidationError("no valid configuration completes the prolog of case '" +
                          test_case.id + "'");
  return *best;
}

namespace {

// Groups bottom-up cases by configuration and re-checks each group's cases
// on the corresponding pruned 100% model.
std::vector<VariantEntry> group_by_configuration(
    const StateMachine& sm150, const MappingModel& map, const TestSuite& suite,
    const std::vector<CaseConfig>& assignments) {
  std::vector<VariantEntry> groups;
  for (const auto& cc : assignments) {
    VariantEntry* entry = nullptr;
    for (auto& g : groups)
      if (g.config == cc.config) entry = &g;
    if (!entry) {
      PruneResult pruned = prune(sm150, map, cc.config);
      VariantEntry g;
      g.config = cc.config;
      g.model = flatten(pruned.machine);
      g.prune_warnings = std::move(pruned.warnings);
      g.suite.source_model = g.model.name();
      groups.push_back(std::move(g));
      entry = &groups.back();
    }
    for (const auto& c : suite.cases)
      if (c.id == cc.case_id) entry->suite.cases.push_back(c);
  }
  for (auto& g : groups) g.suite.coverage = check_coverage(g.model, g.suite);
  return groups;
}

}  // namespace

ProductLineTestPlan bottom_up(const FeatureModel& fm, const StateMachine& sm150,
                              const MappingModel& map, GenStrategy strategy) {
  ProductLineTestPlan plan;
  plan.kind = PipelineKind::BottomUp;
  plan.feature_model_name = fm.name();
  plan.model_name = sm150.name();
  plan.strategy = strategy;
  plan.all_features = fm.sorted_feature_ids();
  plan.deselectable = deselectable_features(fm);
  plan.base_model = sm150;
  plan.mapping = map;

  StateMachine enriched_flat = flatten(enrich(sm150, fm, map));
  TestSuite suite = generate_all_transitions(enriched_flat, FreeAssignment{}, strategy);

  for (const auto& c : suite.cases) {
    Configuration cfg = extract_configuration(c, fm);
    if (!is_valid(fm, cfg))
      throw ValidationError("extracted configuration for case '" + c.id +
                            "' is not valid");
    plan.extracted.push_back({c.id, std::move(cfg)});
  }

  plan.variants = group_by_configuration(sm150, map, suite, plan.extracted);
  plan.enriched = std::move(enriched_flat);
  plan.suite = std::move(suite);
  return plan;
}

ProductLineTestPlan minimize_variants(const ProductLineTestPlan& plan,
                                      const FeatureModel& fm) {
  if (plan.kind != PipelineKind::BottomUp || !plan.enriched || !plan.suite ||
      !plan.base_model || !plan.mapping)
    throw ValidationError("variant minimization requires a bottom-up plan with embedded models");

  auto names = variable_names(fm);
  auto candidates = enumerate_configurations(fm);

  struct Group {
    std::map<std::string, bool> prolog;  // merged bindings
    std::vector<const TestCase*> cases;
    Configuration config;
  };

  auto replays_under = [&](const TestCase& tc, const Configuration& cfg) {
    try {
      replay(*plan.enriched, tc.events, characteristic_assignment(fm, cfg, names));
      return true;
    } catch (const ReplayError&) {
      return false;
    }
  };

  // Cheapest configuration consistent with the merged prolog under which
  // every case of the group still replays.
  auto resolve_config = [&](const std::map<std::string, bool>& prolog,
                            const std::vector<const TestCase*>& cases,
                            Configuration& out) {
    std::map<std::string, bool> bound;
    for (const auto& id : fm.feature_ids()) {
      auto it = prolog.find(names.at(id));
      if (it != prolog.end()) bound[id] = it->second;
    }
    for (const auto& cfg : candidates) {
      bool consistent = true;
      for (const auto& [feature, value] : bound)
        if (cfg.contains(feature) != value) {
          consistent = false;
          break;
        }
      if (!consistent) continue;
      bool ok = true;
      for (const auto* tc : cases)
        if (!replays_under(*tc, cfg)) {
          ok = false;
          break;
        }
      if (ok) {
        out = cfg;  // candidates sorted by id list; sizes scanned in order
        return true;
      }
    }
    return false;
  };

  // candidates are sorted lexicographically; prefer fewest selected features
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Configuration& a, const Configuration& b) {
                     return a.selected.size() < b.selected.size();
                   });

  std::vector<Group> groups;
  for (const auto& tc : plan.suite->cases) {
    bool merged = false;
    for (auto& g : groups) {
      std::map<std::string, bool> unioned = g.prolog;
      bool conflict = false;
      for (const auto& [var, value] : tc.prolog) {
        auto [it, inserted] = unioned.try_emplace(var, value);
        if (!inserted && it->second != value) {
          conflict = true;
          break;
        }
      }
      if (conflict) continue;
      std::vector<const TestCase*> cases = g.cases;
      cases.push_back(&tc);
      Configuration cfg;
      if (!resolve_config(unioned, cases, cfg)) continue;
      g.prolog = std::move(unioned);
      g.cases = std::move(cases);
      g.config = std::move(cfg);
      merged = true;
      break;
    }
    if (!merged) {
      Group g;
      g.prolog = tc.prolog;
      g.cases.push_back(&tc);
      if (!resolve_config(g.prolog, g.cases, g.config))
        throw ValidationError("no valid configuration completes the prolog of case '" +
                              tc.id + "'");
      groups.push_back(std::move(g));
    }
  }

  ProductLineTestPlan out = plan;
  out.extracted.clear();
  for (const auto& g : groups)
    for (const auto* tc : g.cases) out.extracted.push_back({tc->id, g.config});
  std::sort(out.extracted.begin(), out.extracted.end(),
            [](const CaseConfig& a, const CaseConfig& b) { return a.case_id < b.case_id; });
  out.variants = group_by_configuration(*plan.base_model, *plan.mapping,
                                        *plan.suite, out.extracted);

  // Merging must not lose coverage.
  std::set<std::string> before(plan.suite->coverage.covered.begin(),
                               plan.suite->coverage.covered.end());
  std::set<std::string> after;
  for (const auto& g : out.variants)
    after.insert(g.suite.coverage.covered.begin(), g.suite.coverage.covered.end());
  for (const auto& id : before)
    if (!after.count(id))
      throw Error("variant minimization lost coverage of '" + id + "'");
  return out;
}

std::string pipeline_kind_name(PipelineKind kind) {
  return kind == PipelineKind::TopDown ? "top-down" : "bottom-up";
}

std::string strategy_name(GenStrategy strategy) {
  return strategy == GenStrategy::Greedy ? "greedy" : "fewest-cases";
}

std::string criterion_name(FmCriterion criterion) {
  return criterion == FmCriterion::AllFeaturesSelected ? "all-selected"
                                                       : "all-unselected";
}

}  // namespace pltgen
