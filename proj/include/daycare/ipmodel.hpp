#pragma once

#include <map>
#include <string>
#include <vector>

#include "daycare/model.hpp"
#include "daycare/types.hpp"

namespace daycare {

enum class VarKind { kY, kAlpha, kBeta, kGamma };
std::string_view to_string(VarKind kind);

// A model column. `position` indexes the child's projected preference.
struct VarIndex {
  VarKind kind = VarKind::kY;
  ChildIndex child = -1;
  std::size_t position = 0;
  friend bool operator==(const VarIndex&, const VarIndex&) = default;
};

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class RowTag {
  kFeas1, kFeas2, kSync, kFR,
  kNW1, kNW2, kNW3, kNW4,
  kST1, kST2, kST3, kST4,
  kLinkAlpha, kLinkBeta, kLinkGamma,
};
std::string_view to_string(RowTag tag);
inline constexpr int kNumRowTags = 15;

struct Term {
  int column = -1;
  int coef = 0;
  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  int rhs = 0;
  RowTag tag = RowTag::kFeas1;
  // NW/ST rows: the child whose leading positions the row rewards. When the
  // other terms cannot satisfy the row, the subject must take one of them.
  ChildIndex subject = -1;
};

// Strictness ladder: level L adds no-blocking rows for families with at most
// L children. Non-wastefulness rows are present at every level.
struct IpLevel {
  int value = 3;
};

struct IpModel {
  IpLevel level;
  std::vector<VarIndex> columns;
  // Daycare each y column stands for (kUnmatched for sentinel positions and
  // for beta/gamma columns).
  std::vector<DaycareIndex> column_daycare;
  std::vector<LinearConstraint> rows;
  // Maximize: one unit per y column at a non-sentinel position.
  std::vector<Term> objective;

  // Search metadata: y columns per child, indexed by position.
  std::vector<std::vector<int>> y_columns;
  std::vector<FamilyIndex> child_family;
  std::vector<std::vector<ChildIndex>> family_children;
  std::vector<int> capacity;  // effective quota per daycare
  // Families ordered so that children with high priority at the daycares
  // they ask for come first; the builtin search branches in this order.
  std::vector<FamilyIndex> branching_order;
  std::size_t num_children() const { return y_columns.size(); }
};

// Variables are allocated for y, beta and gamma; alpha is substituted as a
// running sum of y. Throws kUnsupportedFamilyShape outside the restricted
// setting (three children, one twin pair).
IpModel build_model(const Instance& inst, IpLevel level);

// One-sided indicator rows: beta/gamma may be 1 only when the daycare is
// already filled by outsiders (higher-priority outsiders for gamma).
std::vector<LinearConstraint> link_beta_gamma(const Instance& inst, const IpModel& model);

struct ModelStats {
  std::map<std::string, int> variables;    // Y, ALPHA (logical), BETA, GAMMA
  std::map<std::string, int> constraints;  // per tag
  int nonzeros = 0;
  friend bool operator==(const ModelStats&, const ModelStats&) = default;
};
ModelStats model_stats(const IpModel& model);

// CPLEX-LP text; one line per row, tags as comments.
std::string export_lp(const IpModel& model);
std::string column_name(const IpModel& model, int column);

}  // namespace daycare
