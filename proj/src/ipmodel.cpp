#include "daycare/ipmodel.hpp"

#include <algorithm>
#include <sstream>

namespace daycare {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::kY: return "Y";
    case VarKind::kAlpha: return "ALPHA";
    case VarKind::kBeta: return "BETA";
    case VarKind::kGamma: return "GAMMA";
  }
  return "Y";
}

std::string_view to_string(RowTag tag) {
  switch (tag) {
    case RowTag::kFeas1: return "FEAS1";
    case RowTag::kFeas2: return "FEAS2";
    case RowTag::kSync: return "SYNC";
    case RowTag::kFR: return "FR";
    case RowTag::kNW1: return "NW-I";
    case RowTag::kNW2: return "NW-II";
    case RowTag::kNW3: return "NW-III";
    case RowTag::kNW4: return "NW-IV";
    case RowTag::kST1: return "ST-I";
    case RowTag::kST2: return "ST-II";
    case RowTag::kST3: return "ST-III";
    case RowTag::kST4: return "ST-IV";
    case RowTag::kLinkAlpha: return "LINK-ALPHA";
    case RowTag::kLinkBeta: return "LINK-BETA";
    case RowTag::kLinkGamma: return "LINK-GAMMA";
  }
  return "?";
}

namespace {

// Accumulates terms, merging repeated columns and dropping zeros.
class RowBuilder {
 public:
  void add(int column, int coef) {
    if (coef != 0) terms_.push_back({column, coef});
  }
  LinearConstraint finish(Sense sense, int rhs, RowTag tag, ChildIndex subject = -1) {
    std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.column < b.column; });
    std::vector<Term> merged;
    for (const auto& t : terms_) {
      if (!merged.empty() && merged.back().column == t.column) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0; });
    return {std::move(merged), sense, rhs, tag, subject};
  }

 private:
  std::vector<Term> terms_;
};

struct Placement {
  ChildIndex child;
  int column;
};

// Every y column, grouped by the daycare it stands for.
std::vector<std::vector<Placement>> placements_by_daycare(const IpModel& m, std::size_t num_daycares) {
  std::vector<std::vector<Placement>> out(num_daycares);
  for (int col = 0; col < static_cast<int>(m.columns.size()); ++col) {
    if (m.columns[col].kind != VarKind::kY || m.column_daycare[col] == kUnmatched) continue;
    out[m.column_daycare[col]].push_back({m.columns[col].child, col});
  }
  return out;
}

// Child of `entry` whose indicator carries the entry: the lower-priority twin
// for a shared daycare, the child itself otherwise.
ChildIndex representative(const Instance& inst, const DemandEntry& entry) {
  ChildIndex rep = entry.demanders.front();
  for (ChildIndex c : entry.demanders)
    if (inst.outranks(entry.daycare, rep, c)) rep = c;
  return rep;
}

RowTag nw_tag(std::size_t family_size, const DemandTable& table) {
  if (family_size == 1) return RowTag::kNW1;
  int pairs = 0;
  for (const auto& e : table)
    if (e.demanders.size() == 2) ++pairs;
  if (pairs == 0) return RowTag::kNW3;
  return table.size() == 1 ? RowTag::kNW2 : RowTag::kNW4;
}

RowTag st_tag(RowTag nw) {
  return static_cast<RowTag>(static_cast<int>(nw) + (static_cast<int>(RowTag::kST1) - static_cast<int>(RowTag::kNW1)));
}

// A child's standing at a daycare is its rank among that daycare's
// applicants, scaled to [0, 1). Families sort by their best child's mean
// standing over the daycares it lists.
std::vector<FamilyIndex> branching_order(const Instance& inst, const IpModel& m,
                                         const std::vector<std::vector<Placement>>& by_daycare) {
  std::vector<double> standing_sum(inst.num_children(), 0.0);
  std::vector<int> standing_n(inst.num_children(), 0);
  for (DaycareIndex d = 0; d < static_cast<DaycareIndex>(inst.num_daycares()); ++d) {
    std::vector<ChildIndex> applicants;
    for (const auto& pl : by_daycare[d]) applicants.push_back(pl.child);
    std::sort(applicants.begin(), applicants.end(),
              [&](ChildIndex a, ChildIndex b) { return inst.daycare(d).rank[a] < inst.daycare(d).rank[b]; });
    applicants.erase(std::unique(applicants.begin(), applicants.end()), applicants.end());
    for (std::size_t i = 0; i < applicants.size(); ++i) {
      standing_sum[applicants[i]] += static_cast<double>(i) / static_cast<double>(applicants.size());
      ++standing_n[applicants[i]];
    }
  }
  std::vector<double> key(inst.num_families(), 2.0);
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f)
    for (ChildIndex c : m.family_children[f])
      if (standing_n[c] > 0) key[f] = std::min(key[f], standing_sum[c] / standing_n[c]);
  std::vector<FamilyIndex> order(inst.num_families());
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(order.size()); ++f) order[f] = f;
  std::stable_sort(order.begin(), order.end(), [&](FamilyIndex a, FamilyIndex b) { return key[a] < key[b]; });
  return order;
}

}  // namespace

IpModel build_model(const Instance& inst, IpLevel level) {
  if (level.value < 0 || level.value > 3)
    throw MatchError(ErrorCode::kInvalidConfig, "level must be within 0..3");
  IpModel m;
  m.level = level;
  m.y_columns.resize(inst.num_children());
  m.child_family.resize(inst.num_children());
  m.family_children.resize(inst.num_families());
  for (const auto& d : inst.daycares()) m.capacity.push_back(d.effective_quota);

  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    if (!in_restricted_setting(inst, f))
      throw MatchError(ErrorCode::kUnsupportedFamilyShape,
                       "family '" + inst.family(f).id + "' has more than three children or more than one twin pair");
    const auto& fam = inst.family(f);
    m.family_children[f] = fam.children;
    const auto projected = project_preferences(fam);
    for (std::size_t i = 0; i < fam.children.size(); ++i) {
      const ChildIndex c = fam.children[i];
      m.child_family[c] = f;
      for (std::size_t p = 0; p < projected[i].size(); ++p) {
        m.y_columns[c].push_back(static_cast<int>(m.columns.size()));
        m.columns.push_back({VarKind::kY, c, p});
        m.column_daycare.push_back(projected[i][p]);
      }
    }
  }

  for (ChildIndex c = 0; c < static_cast<ChildIndex>(inst.num_children()); ++c) {
    if (m.y_columns[c].empty()) continue;
    RowBuilder feas1;
    for (int col : m.y_columns[c]) feas1.add(col, 1);
    m.rows.push_back(feas1.finish(Sense::kLessEqual, 1, RowTag::kFeas1));
  }

  const auto by_daycare = placements_by_daycare(m, inst.num_daycares());
  for (DaycareIndex d = 0; d < static_cast<DaycareIndex>(inst.num_daycares()); ++d) {
    if (by_daycare[d].empty()) continue;
    RowBuilder feas2;
    for (const auto& pl : by_daycare[d]) feas2.add(pl.column, 1);
    m.rows.push_back(feas2.finish(Sense::kLessEqual, inst.quota(d), RowTag::kFeas2));
  }

  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const auto& kids = inst.family(f).children;
    for (std::size_t p = 0; p < inst.family(f).preference.size(); ++p) {
      for (std::size_t i = 1; i < kids.size(); ++i) {
        RowBuilder sync;
        sync.add(m.y_columns[kids[0]][p], 1);
        sync.add(m.y_columns[kids[i]][p], -1);
        m.rows.push_back(sync.finish(Sense::kEqual, 0, RowTag::kSync));
      }
    }
  }

  for (ChildIndex c = 0; c < static_cast<ChildIndex>(inst.num_children()); ++c) {
    if (inst.child(c).initial == kUnmatched) continue;
    RowBuilder fr;
    for (int col : m.y_columns[c]) fr.add(col, 1);
    m.rows.push_back(fr.finish(Sense::kEqual, 1, RowTag::kFR));
  }

  // Indicator columns are created on first use, keyed by (kind, child, position).
  std::map<std::tuple<int, ChildIndex, std::size_t>, int> indicator;
  auto indicator_column = [&](VarKind kind, ChildIndex c, std::size_t p) {
    auto key = std::tuple{static_cast<int>(kind), c, p};
    auto it = indicator.find(key);
    if (it != indicator.end()) return it->second;
    const int col = static_cast<int>(m.columns.size());
    m.columns.push_back({kind, c, p});
    m.column_daycare.push_back(kUnmatched);
    indicator.emplace(key, col);
    return col;
  };

  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const auto& fam = inst.family(f);
    const bool with_stability = static_cast<int>(fam.children.size()) <= level.value;
    for (std::size_t p = 0; p < fam.preference.size(); ++p) {
      const Tuple& tuple = fam.preference[p];
      if (fam.children.size() == 1) {
        const ChildIndex c = fam.children[0];
        const DaycareIndex d = tuple[0];
        const int q = inst.quota(d);
        RowBuilder nw;
        for (std::size_t r = 0; r <= p; ++r) nw.add(m.y_columns[c][r], q);
        for (const auto& pl : by_daycare[d]) nw.add(pl.column, 1);
        m.rows.push_back(nw.finish(Sense::kGreaterEqual, q, RowTag::kNW1, c));
        if (with_stability) {
          RowBuilder st;
          for (std::size_t r = 0; r <= p; ++r) st.add(m.y_columns[c][r], q);
          for (const auto& pl : by_daycare[d])
            if (inst.outranks(d, pl.child, c)) st.add(pl.column, 1);
          m.rows.push_back(st.finish(Sense::kGreaterEqual, q, RowTag::kST1, c));
        }
        continue;
      }

      const DemandTable table = group_by_daycare(fam, tuple);
      const RowTag nw_kind = nw_tag(fam.children.size(), table);
      ChildIndex alpha_child = fam.children[0];
      for (const auto& e : table)
        if (e.demanders.size() == 2) alpha_child = representative(inst, e);

      RowBuilder nw;
      for (std::size_t r = 0; r <= p; ++r) nw.add(m.y_columns[alpha_child][r], 1);
      for (const auto& e : table) nw.add(indicator_column(VarKind::kBeta, representative(inst, e), p), 1);
      m.rows.push_back(nw.finish(Sense::kGreaterEqual, 1, nw_kind, alpha_child));

      if (with_stability) {
        RowBuilder st;
        for (std::size_t r = 0; r <= p; ++r) st.add(m.y_columns[alpha_child][r], 1);
        for (const auto& e : table) st.add(indicator_column(VarKind::kGamma, representative(inst, e), p), 1);
        m.rows.push_back(st.finish(Sense::kGreaterEqual, 1, st_tag(nw_kind), alpha_child));
      }
    }
  }

  for (auto& row : link_beta_gamma(inst, m)) m.rows.push_back(std::move(row));

  for (int col = 0; col < static_cast<int>(m.columns.size()); ++col)
    if (m.columns[col].kind == VarKind::kY && m.column_daycare[col] != kUnmatched) m.objective.push_back({col, 1});
  m.branching_order = branching_order(inst, m, by_daycare);
  return m;
}

std::vector<LinearConstraint> link_beta_gamma(const Instance& inst, const IpModel& model) {
  std::vector<LinearConstraint> out;
  const auto by_daycare = placements_by_daycare(model, inst.num_daycares());
  for (int col = 0; col < static_cast<int>(model.columns.size()); ++col) {
    const VarIndex& v = model.columns[col];
    if (v.kind != VarKind::kBeta && v.kind != VarKind::kGamma) continue;
    const FamilyIndex f = inst.child(v.child).family;
    const auto& fam = inst.family(f);
    const Tuple& tuple = fam.preference[v.position];
    const auto slot = std::find(fam.children.begin(), fam.children.end(), v.child) - fam.children.begin();
    const DaycareIndex d = tuple[slot];
    const auto shared = std::count(tuple.begin(), tuple.end(), d);
    // Seats the outsiders must already hold for the family not to fit.
    const int needed = inst.quota(d) - static_cast<int>(shared) + 1;

    RowBuilder link;
    for (const auto& pl : by_daycare[d]) {
      if (inst.child(pl.child).family == f) continue;
      if (v.kind == VarKind::kGamma && !inst.outranks(d, pl.child, v.child)) continue;
      link.add(pl.column, 1);
    }
    link.add(col, -needed);
    out.push_back(link.finish(Sense::kGreaterEqual, 0,
                              v.kind == VarKind::kBeta ? RowTag::kLinkBeta : RowTag::kLinkGamma));
  }
  return out;
}

ModelStats model_stats(const IpModel& model) {
  ModelStats s;
  for (auto kind : {VarKind::kY, VarKind::kAlpha, VarKind::kBeta, VarKind::kGamma})
    s.variables[std::string(to_string(kind))] = 0;
  for (int t = 0; t < kNumRowTags; ++t) s.constraints[std::string(to_string(static_cast<RowTag>(t)))] = 0;
  for (const auto& v : model.columns) {
    ++s.variables[std::string(to_string(v.kind))];
    if (v.kind == VarKind::kY) ++s.variables["ALPHA"];
  }
  for (const auto& row : model.rows) {
    ++s.constraints[std::string(to_string(row.tag))];
    s.nonzeros += static_cast<int>(row.terms.size());
  }
  return s;
}

std::string column_name(const IpModel& model, int column) {
  const VarIndex& v = model.columns.at(column);
  const char* prefix = v.kind == VarKind::kY ? "y" : v.kind == VarKind::kBeta ? "b" : v.kind == VarKind::kGamma ? "g" : "a";
  return std::string(prefix) + "_" + std::to_string(v.child) + "_" + std::to_string(v.position);
}

std::string export_lp(const IpModel& model) {
  std::ostringstream out;
  out << "\\ daycare matching model, level " << model.level.value << "\n";
  out << "Maximize\n obj:";
  if (model.objective.empty()) out << " 0 " << (model.columns.empty() ? "dummy" : column_name(model, 0));
  for (const auto& t : model.objective) out << " + " << column_name(model, t.column);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const auto& row = model.rows[r];
    out << "\\ " << to_string(row.tag) << "\n r" << r << ":";
    if (row.terms.empty()) out << " 0 " << (model.columns.empty() ? "dummy" : column_name(model, 0));
    for (const auto& t : row.terms) {
      out << (t.coef < 0 ? " - " : " + ");
      if (std::abs(t.coef) != 1) out << std::abs(t.coef) << " ";
      out << column_name(model, t.column);
    }
    out << (row.sense == Sense::kLessEqual ? " <= " : row.sense == Sense::kEqual ? " = " : " >= ") << row.rhs << "\n";
  }
  out << "Binary\n";
  for (int c = 0; c < static_cast<int>(model.columns.size()); ++c) out << " " << column_name(model, c) << "\n";
  if (model.columns.empty()) out << " dummy\n";
  out << "End\n";
  return out.str();
}

}  // namespace daycare
