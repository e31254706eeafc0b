#include "pltgen/feature_model.hpp"

#include <algorithm>
#include <cctype>

#include "pltgen/errors.hpp"

namespace pltgen {

int FeatureModel::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownFeatureError(id);
  return it->second;
}

std::vector<std::string> FeatureModel::feature_ids() const {
  std::vector<std::string> ids;
  ids.reserve(nodes_.size());
  for (const auto& n : nodes_) ids.push_back(n.id);
  return ids;
}

std::vector<std::string> FeatureModel::sorted_feature_ids() const {
  auto ids = feature_ids();
  std::sort(ids.begin(), ids.end());
  return ids;
}

FeatureModel::Builder::Builder(std::string model_name) {
  fm_.name_ = std::move(model_name);
}

int FeatureModel::Builder::add_node(const std::string& id, int parent,
                                    ChildKind kind, int group) {
  if (fm_.index_.count(id))
    throw ParseError("duplicate feature id '" + id + "'");
  int idx = static_cast<int>(fm_.nodes_.size());
  FeatureNode n;
  n.id = id;
  n.parent = parent;
  n.kind = kind;
  n.group = group;
  fm_.nodes_.push_back(std::move(n));
  fm_.index_[id] = idx;
  if (parent >= 0) fm_.nodes_[parent].children.push_back(idx);
  return idx;
}

FeatureModel::Builder& FeatureModel::Builder::root(const std::string& id) {
  if (has_root_) throw ParseError("feature model already has a root");
  add_node(id, -1, ChildKind::Mandatory, -1);
  has_root_ = true;
  return *this;
}

FeatureModel::Builder& FeatureModel::Builder::child(const std::string& parent,
                                                    const std::string& id,
                                                    ChildKind kind) {
  if (kind != ChildKind::Mandatory && kind != ChildKind::Optional)
    throw ParseError("group members must be declared through group()");
  auto it = fm_.index_.find(parent);
  if (it == fm_.index_.end())
    throw ParseError("unknown parent feature '" + parent + "'");
  add_node(id, it->second, kind, -1);
  return *this;
}

FeatureModel::Builder& FeatureModel::Builder::group(
    const std::string& parent, GroupKind kind,
    const std::vector<std::string>& member_ids) {
  auto it = fm_.index_.find(parent);
  if (it == fm_.index_.end())
    throw ParseError("unknown parent feature '" + parent + "'");
  if (member_ids.size() < 2)
    throw ParseError("group under '" + parent + "' has fewer than 2 members");
  FeatureGroup g;
  g.kind = kind;
  g.parent = it->second;
  int gidx = static_cast<int>(fm_.groups_.size());
  fm_.groups_.push_back(g);
  ChildKind ck = kind == GroupKind::Or ? ChildKind::OrMember : ChildKind::AltMember;
  for (const auto& m : member_ids)
    fm_.groups_[gidx].members.push_back(add_node(m, it->second, ck, gidx));
  return *this;
}

FeatureModel::Builder& FeatureModel::Builder::constraint(BoolExpr expr) {
  fm_.constraints_.push_back(std::move(expr));
  return *this;
}

FeatureModel FeatureModel::Builder::build() {
  if (!has_root_) throw ParseError("feature model has no root feature");
  for (const auto& c : fm_.constraints_)
    for (const auto& v : variables(c))
      if (!fm_.index_.count(v))
        throw ParseError("constraint references undeclared feature '" + v + "'");
  return std::move(fm_);
}

namespace {

// Rule evaluation over a selection bitmask (bit i = nodes()[i] selected).
bool mask_valid(const FeatureModel& fm, std::uint64_t mask) {
  const auto& nodes = fm.nodes();
  if (!(mask & 1)) return false;  // root always selected
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    bool sel = mask >> i & 1;
    bool parent_sel = mask >> nodes[i].parent & 1;
    if (sel && !parent_sel) return false;
    if (!sel && parent_sel && nodes[i].kind == ChildKind::Mandatory) return false;
  }
  for (const auto& g : fm.groups()) {
    if (!(mask >> g.parent & 1)) {
      // members are children of the parent; the parent rule above already
      // forces them unselected
      continue;
    }
    int count = 0;
    for (int m : g.members) count += mask >> m & 1;
    if (g.kind == GroupKind::Or && count < 1) return false;
    if (g.kind == GroupKind::Alternative && count != 1) return false;
  }
  for (const auto& c : fm.constraints()) {
    bool ok = eval(c, [&](const std::string& id) {
      return (mask >> fm.index_of(id) & 1) != 0;
    });
    if (!ok) return false;
  }
  return true;
}

std::uint64_t mask_of(const FeatureModel& fm, const Configuration& cfg) {
  std::uint64_t mask = 0;
  for (const auto& id : cfg.selected)
    mask |= std::uint64_t{1} << fm.index_of(id);
  return mask;
}

Configuration config_of(const FeatureModel& fm, std::uint64_t mask) {
  Configuration cfg;
  const auto& nodes = fm.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (mask >> i & 1) cfg.selected.insert(nodes[i].id);
  return cfg;
}

void check_bound(const FeatureModel& fm, std::size_t max_features) {
  if (fm.feature_count() > max_features)
    throw BoundExceededError(fm.feature_count(), max_features);
}

template <typename Fn>
void for_each_valid_mask(const FeatureModel& fm, Fn&& fn) {
  std::uint64_t total = std::uint64_t{1} << fm.feature_count();
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (mask_valid(fm, mask))
      if (!fn(mask)) return;
}

}  // namespace

bool is_valid(const FeatureModel& fm, const Configuration& cfg) {
  return mask_valid(fm, mask_of(fm, cfg));
}

std::vector<Configuration> enumerate_configurations(const FeatureModel& fm,
                                                    std::size_t cap,
                                                    std::size_t max_features) {
  check_bound(fm, max_features);
  std::vector<Configuration> out;
  for_each_valid_mask(fm, [&](std::uint64_t mask) {
    if (out.size() == cap) throw CapExceededError(cap);
    out.push_back(config_of(fm, mask));
    return true;
  });
  std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
    return a.sorted_ids() < b.sorted_ids();
  });
  return out;
}

std::size_t count_configurations(const FeatureModel& fm, std::size_t max_features) {
  check_bound(fm, max_features);
  std::size_t n = 0;
  for_each_valid_mask(fm, [&](std::uint64_t) {
    ++n;
    return true;
  });
  return n;
}

bool satisfiable(const FeatureModel& fm, std::size_t max_features) {
  check_bound(fm, max_features);
  bool found = false;
  for_each_valid_mask(fm, [&](std::uint64_t) {
    found = true;
    return false;
  });
  return found;
}

std::vector<std::string> deselectable_features(const FeatureModel& fm,
                                               std::size_t max_features) {
  check_bound(fm, max_features);
  std::uint64_t all = (std::uint64_t{1} << fm.feature_count()) - 1;
  std::uint64_t ever_absent = 0;
  for_each_valid_mask(fm, [&](std::uint64_t mask) {
    ever_absent |= all & ~mask;
    return ever_absent != all;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < fm.feature_count(); ++i)
    if (ever_absent >> i & 1) out.push_back(fm.nodes()[i].id);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// One obligation per (feature, polarity) pair requested by the criteria.
// Both polarities are restricted to features for which the polarity occurs
// in at least one valid configuration; an impossible obligation would make
// every criterion unsatisfiable on models with dead features.
struct Obligation {
  int feature;
  bool selected;
};

std::vector<std::string> selectable_features(const FeatureModel& fm) {
  std::uint64_t ever_present = 0;
  std::uint64_t all = (std::uint64_t{1} << fm.feature_count()) - 1;
  for_each_valid_mask(fm, [&](std::uint64_t mask) {
    ever_present |= mask;
    return ever_present != all;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < fm.feature_count(); ++i)
    if (ever_present >> i & 1) out.push_back(fm.nodes()[i].id);
  return out;
}

std::vector<Obligation> obligations_for(const FeatureModel& fm,
                                        const std::set<FmCriterion>& criteria,
                                        const std::vector<std::string>& deselectable) {
  std::vector<Obligation> obs;
  if (criteria.count(FmCriterion::AllFeaturesSelected))
    for (const auto& id : selectable_features(fm))
      obs.push_back({fm.index_of(id), true});
  if (criteria.count(FmCriterion::AllFeaturesUnselected))
    for (const auto& id : deselectable)
      obs.push_back({fm.index_of(id), false});
  return obs;
}

bool covers(const Configuration& cfg, const FeatureModel& fm, const Obligation& ob) {
  return cfg.contains(fm.nodes()[ob.feature].id) == ob.selected;
}

}  // namespace

std::vector<Configuration> derive_variants(const FeatureModel& fm,
                                           const std::set<FmCriterion>& criteria,
                                           std::size_t max_features) {
  auto all = enumerate_configurations(fm, kNoCap, max_features);
  if (all.empty()) throw UnsatisfiableError();
  auto deselectable = deselectable_features(fm, max_features);
  auto obs = obligations_for(fm, criteria, deselectable);

  std::vector<bool> met(obs.size(), false);
  std::size_t unmet = obs.size();
  std::vector<Configuration> picks;
  while (unmet > 0) {
    const Configuration* best = nullptr;
    std::size_t best_gain = 0;
    for (const auto& cfg : all) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < obs.size(); ++i)
        if (!met[i] && covers(cfg, fm, obs[i])) ++gain;
      // enumerate_configurations is sorted, so the first maximum is the
      // lexicographically smallest one
      if (gain > best_gain) {
        best_gain = gain;
        best = &cfg;
      }
    }
    if (!best) break;  // remaining obligations unreachable; criteria semantics
                       // guarantee this does not happen (deselectable filter)
    for (std::size_t i = 0; i < obs.size(); ++i)
      if (!met[i] && covers(*best, fm, obs[i])) {
        met[i] = true;
        --unmet;
      }
    picks.push_back(*best);
  }

  // Drop picks that became redundant, scanning in pick order.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p < picks.size(); ++p) {
      bool needed = false;
      for (const auto& ob : obs) {
        bool covered_elsewhere = false;
        for (std::size_t q = 0; q < picks.size(); ++q)
          if (q != p && covers(picks[q], fm, ob)) {
            covered_elsewhere = true;
            break;
          }
        if (!covered_elsewhere && covers(picks[p], fm, ob)) {
          needed = true;
          break;
        }
      }
      if (!needed) {
        picks.erase(picks.begin() + static_cast<long>(p));
        changed = true;
        break;
      }
    }
  }

  std::sort(picks.begin(), picks.end(), [](const Configuration& a, const Configuration& b) {
    return a.sorted_ids() < b.sorted_ids();
  });
  return picks;
}

bool criteria_satisfied(const FeatureModel& fm,
                        const std::set<FmCriterion>& criteria,
                        const std::vector<Configuration>& configs,
                        std::size_t max_features) {
  for (const auto& cfg : configs)
    if (!is_valid(fm, cfg)) return false;
  auto deselectable = deselectable_features(fm, max_features);
  auto obs = obligations_for(fm, criteria, deselectable);
  for (const auto& ob : obs) {
    bool hit = false;
    for (const auto& cfg : configs)
      if (covers(cfg, fm, ob)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

std::string feature_variable_name(const std::string& feature_id) {
  std::string v = feature_id;
  if (!v.empty()) v[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(v[0])));
  return v;
}

}  // namespace pltgen
