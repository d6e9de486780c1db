#include "daycare/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace daycare {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kFeasible: return "FEASIBLE";
    case SolveStatus::kInfeasible: return "INFEASIBLE";
    case SolveStatus::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

void SolverConfig::validate() const {
  if (!(time_limit_seconds > 0.0)) throw MatchError(ErrorCode::kInvalidConfig, "time limit must be positive");
  if (node_limit <= 0) throw MatchError(ErrorCode::kInvalidConfig, "node limit must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::int8_t kFree = -1;

// Depth-first branch-and-bound over the 0-1 columns with bound propagation
// on every row (rows normalized to sum a_i x_i <= b).
class BranchAndBound {
 public:
  BranchAndBound(const IpModel& model, const SolverConfig& config)
      : model_(model), config_(config), start_(Clock::now()) {
    const int n = static_cast<int>(model.columns.size());
    value_.assign(n, kFree);
    occurrences_.resize(n);
    for (const auto& row : model.rows) {
      if (row.sense != Sense::kGreaterEqual) add_row(row.terms, row.rhs, 1, -1);
      if (row.sense != Sense::kLessEqual) add_row(row.terms, row.rhs, -1, row.subject);
    }
    load_.assign(model.capacity.size(), 0);
    child_matched_.assign(model.num_children(), 0);
    in_queue_.assign(rows_.size(), 0);
    for (int col = 0; col < n; ++col)
      if (model.columns[col].kind != VarKind::kY) indicator_columns_.push_back(col);
  }

  SolveResult run() {
    SolveResult result;
    bool exhausted = false;
    bool ok = true;
    for (std::size_t r = 0; r < rows_.size(); ++r) enqueue(static_cast<int>(r));

    while (true) {
      if (limit_reached()) break;
      ++stats_.nodes;
      ok = ok && propagate();
      if (ok && upper_bound() > incumbent_value_) {
        const int col = pick_branch_column();
        if (col >= 0) {
          frames_.push_back({col, 1, trail_.size(), false});
          ok = fix(col, 1);
          continue;
        }
        record_incumbent();
      }
      // Backtrack to the deepest decision with an untried value.
      while (!frames_.empty() && frames_.back().flipped) {
        undo_to(frames_.back().trail_size);
        frames_.pop_back();
      }
      if (frames_.empty()) {
        exhausted = true;
        break;
      }
      Frame& top = frames_.back();
      undo_to(top.trail_size);
      top.flipped = true;
      ok = fix(top.column, static_cast<std::int8_t>(1 - top.value));
    }

    const bool have = incumbent_value_ >= 0;
    if (exhausted) {
      result.status = have ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    } else {
      result.status = have ? SolveStatus::kFeasible : SolveStatus::kUnknown;
    }
    if (have) {
      result.assignment = best_;
      result.matching = decode(model_, best_);
      result.objective = incumbent_value_;
    }
    stats_.runtime_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    result.stats = stats_;
    return result;
  }

 private:
  struct Row {
    std::size_t begin = 0;
    std::size_t end = 0;
    int rhs = 0;
    int min_activity = 0;
    int max_abs = 0;
    ChildIndex subject = -1;
    int subject_weight = 0;        // sum of |a| over the subject's terms
    std::size_t subject_last = 0;  // highest subject position in the row
    std::size_t subject_end = 0;   // subject terms occupy [begin, subject_end)
  };
  struct Occurrence {
    int row;
    int coef;
  };
  struct Frame {
    int column;
    std::int8_t value;
    std::size_t trail_size;
    bool flipped;
  };

  void add_row(const std::vector<Term>& terms, int rhs, int sign, ChildIndex subject) {
    Row row;
    row.begin = terms_.size();
    row.rhs = sign * rhs;
    row.subject = subject;
    for (const auto& t : terms) {
      const int a = sign * t.coef;
      terms_.push_back({t.column, a});
      occurrences_[t.column].push_back({static_cast<int>(rows_.size()), a});
      if (a < 0) row.min_activity += a;
      row.max_abs = std::max(row.max_abs, std::abs(a));
      if (is_subject_term(row, t.column, a)) {
        row.subject_weight -= a;
        row.subject_last = std::max(row.subject_last, model_.columns[t.column].position);
      }
    }
    if (row.subject_weight == 0) row.subject = -1;
    row.end = terms_.size();
    // Subject terms first, then by falling |a|, so scans stop at the slack.
    const auto first = terms_.begin() + static_cast<std::ptrdiff_t>(row.begin);
    std::stable_sort(first, terms_.end(), [&](const Term& x, const Term& y) {
      const bool sx = is_subject_term(row, x.column, x.coef);
      const bool sy = is_subject_term(row, y.column, y.coef);
      if (sx != sy) return sx;
      return std::abs(x.coef) > std::abs(y.coef);
    });
    row.subject_end = row.begin;
    while (row.subject_end < row.end && is_subject_term(row, terms_[row.subject_end].column, terms_[row.subject_end].coef))
      ++row.subject_end;
    rows_.push_back(row);
  }

  bool limit_reached() {
    if (stats_.nodes >= config_.node_limit) return true;
    if ((stats_.nodes & 255) == 0) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
      if (elapsed >= config_.time_limit_seconds) timed_out_ = true;
    }
    return timed_out_;
  }

  void enqueue(int row) {
    if (in_queue_[row]) return;
    in_queue_[row] = 1;
    queue_.push_back(row);
  }

  void clear_queue() {
    for (int r : queue_) in_queue_[r] = 0;
    queue_.clear();
  }

  // Returns false on an immediate conflict; rows stay queued for propagate().
  bool fix(int col, std::int8_t v) {
    value_[col] = v;
    trail_.push_back(col);
    bool ok = true;
    for (const auto& occ : occurrences_[col]) {
      const bool raises = (v == 1 && occ.coef > 0) || (v == 0 && occ.coef < 0);
      if (!raises) continue;
      Row& row = rows_[occ.row];
      row.min_activity += std::abs(occ.coef);
      if (row.min_activity > row.rhs) ok = false;
      enqueue(occ.row);
    }
    if (model_.columns[col].kind == VarKind::kY && v == 1) {
      child_matched_[model_.columns[col].child] = 1;
      const DaycareIndex d = model_.column_daycare[col];
      if (d != kUnmatched) {
        ++load_[d];
        ++matched_;
      }
    }
    if (!ok) clear_queue();
    return ok;
  }

  void undo_to(std::size_t size) {
    clear_queue();
    while (trail_.size() > size) {
      const int col = trail_.back();
      trail_.pop_back();
      const std::int8_t v = value_[col];
      for (const auto& occ : occurrences_[col]) {
        const bool raises = (v == 1 && occ.coef > 0) || (v == 0 && occ.coef < 0);
        if (raises) rows_[occ.row].min_activity -= std::abs(occ.coef);
      }
      if (model_.columns[col].kind == VarKind::kY && v == 1) {
        child_matched_[model_.columns[col].child] = 0;
        const DaycareIndex d = model_.column_daycare[col];
        if (d != kUnmatched) {
          --load_[d];
          --matched_;
        }
      }
      value_[col] = kFree;
    }
  }

  bool is_subject_term(const Row& row, int column, int coef) const {
    const VarIndex& v = model_.columns[column];
    return row.subject >= 0 && coef < 0 && v.kind == VarKind::kY && v.child == row.subject;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const int r = queue_.back();
      queue_.pop_back();
      in_queue_[r] = 0;
      const Row& row = rows_[r];
      const int slack = row.rhs - row.min_activity;
      if (slack < 0) {
        clear_queue();
        return false;
      }
      if (slack < row.max_abs) {
        for (std::size_t i = row.begin; i < row.end; ++i) {
          const Term& t = terms_[i];
          if (std::abs(t.coef) <= slack) {
            if (i >= row.subject_end) break;
            continue;
          }
          if (value_[t.column] == kFree && !fix(t.column, t.coef > 0 ? 0 : 1)) return false;
        }
      }
      if (row.subject >= 0 && slack < row.subject_weight && !propagate_subject(row)) return false;
    }
    return true;
  }

  // Without the subject's free terms the row cannot hold, so the subject
  // sits at one of its positions in the row: every later position is 0.
  bool propagate_subject(const Row& row) {
    int gain = 0;
    for (std::size_t i = row.begin; i < row.subject_end; ++i)
      if (value_[terms_[i].column] == kFree) gain -= terms_[i].coef;
    if (row.rhs - row.min_activity >= gain) return true;
    const auto& cols = model_.y_columns[row.subject];
    for (std::size_t p = row.subject_last + 1; p < cols.size(); ++p)
      if (value_[cols[p]] == kFree && !fix(cols[p], 0)) return false;
    return true;
  }

  // Matched children so far plus how many undecided children could still be
  // seated, capped by a capacity-respecting assignment of them.
  int upper_bound() {
    candidates_.clear();
    for (ChildIndex c = 0; c < static_cast<ChildIndex>(model_.num_children()); ++c) {
      if (child_matched_[c]) continue;
      for (int col : model_.y_columns[c]) {
        const DaycareIndex d = model_.column_daycare[col];
        if (value_[col] == kFree && d != kUnmatched && load_[d] < model_.capacity[d]) {
          candidates_.push_back(c);
          break;
        }
      }
    }
    const int cheap = matched_ + static_cast<int>(candidates_.size());
    if (cheap <= incumbent_value_) return cheap;
    return matched_ + assignable_candidates();
  }

  // Maximum b-matching of candidate children to residual seats (augmenting
  // paths over daycares).
  int assignable_candidates() {
    const std::size_t nd = model_.capacity.size();
    seat_holders_.assign(nd, {});
    int assigned = 0;
    for (ChildIndex c : candidates_) {
      visit_stamp_.assign(nd, 0);
      if (augment(c)) ++assigned;
    }
    return assigned;
  }

  bool augment(ChildIndex c) {
    for (int col : model_.y_columns[c]) {
      const DaycareIndex d = model_.column_daycare[col];
      if (value_[col] != kFree || d == kUnmatched || visit_stamp_[d]) continue;
      const int residual = model_.capacity[d] - load_[d];
      if (residual <= 0) continue;
      visit_stamp_[d] = 1;
      if (static_cast<int>(seat_holders_[d].size()) < residual) {
        seat_holders_[d].push_back(c);
        return true;
      }
      for (auto& holder : seat_holders_[d]) {
        if (augment(holder)) {
          holder = c;
          return true;
        }
      }
    }
    return false;
  }

  int pick_branch_column() const {
    for (FamilyIndex f : model_.branching_order) {
      const auto& kids = model_.family_children[f];
      const std::size_t positions = model_.y_columns[kids.front()].size();
      for (std::size_t p = 0; p < positions; ++p)
        for (ChildIndex c : kids)
          if (value_[model_.y_columns[c][p]] == kFree) return model_.y_columns[c][p];
    }
    for (int col : indicator_columns_)
      if (value_[col] == kFree) return col;
    return -1;
  }

  void record_incumbent() {
    incumbent_value_ = matched_;
    best_.assign(value_.size(), 0);
    for (std::size_t i = 0; i < value_.size(); ++i) best_[i] = value_[i] == 1 ? 1 : 0;
    ++stats_.incumbents;
  }

  const IpModel& model_;
  const SolverConfig& config_;
  Clock::time_point start_;
  bool timed_out_ = false;

  std::vector<Row> rows_;
  std::vector<Term> terms_;
  std::vector<std::vector<Occurrence>> occurrences_;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<std::uint8_t> in_queue_;
  std::vector<Frame> frames_;
  std::vector<int> indicator_columns_;

  std::vector<int> load_;
  std::vector<std::uint8_t> child_matched_;
  int matched_ = 0;

  std::vector<ChildIndex> candidates_;
  std::vector<std::vector<ChildIndex>> seat_holders_;
  std::vector<std::uint8_t> visit_stamp_;

  int incumbent_value_ = -1;
  std::vector<std::uint8_t> best_;
  SolveStats stats_;
};

SolveResult solve_external(const IpModel& model, const SolverConfig& config) {
  namespace fs = std::filesystem;
  const auto start = Clock::now();
  SolveResult result;
  auto finish = [&]() {
    result.stats.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };

  std::error_code ec;
  const fs::path dir = fs::temp_directory_path(ec) /
                       ("daycare-match-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  if (ec || !fs::create_directories(dir, ec)) return finish();
  const fs::path lp = dir / "model.lp";
  const fs::path sol = dir / "solution.txt";
  {
    std::ofstream out(lp);
    out << export_lp(model);
  }
  const std::string cmd = config.external_adapter + " '" + lp.string() + "' '" + sol.string() + "'";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(sol);
  if (rc != 0 || !in) {
    fs::remove_all(dir, ec);
    return finish();
  }

  std::map<std::string, int> by_name;
  for (int c = 0; c < static_cast<int>(model.columns.size()); ++c) by_name.emplace(column_name(model, c), c);
  std::string key, status;
  in >> key >> status;
  std::vector<std::uint8_t> assignment(model.columns.size(), 0);
  std::string name;
  int v = 0;
  bool parsed = key == "status";
  while (parsed && in >> name >> v) {
    auto it = by_name.find(name);
    if (it == by_name.end() || (v != 0 && v != 1)) {
      parsed = false;
      break;
    }
    assignment[it->second] = static_cast<std::uint8_t>(v);
  }
  fs::remove_all(dir, ec);
  if (!parsed) return finish();

  if (status == "INFEASIBLE") {
    result.status = SolveStatus::kInfeasible;
    return finish();
  }
  if ((status != "OPTIMAL" && status != "FEASIBLE") || !satisfies(model, assignment)) return finish();
  result.status = status == "OPTIMAL" ? SolveStatus::kOptimal : SolveStatus::kFeasible;
  result.matching = decode(model, assignment);
  result.objective = result.matching->matched_count();
  result.assignment = std::move(assignment);
  return finish();
}

}  // namespace

SolveResult solve(const IpModel& model, const SolverConfig& config) {
  config.validate();
  if (!config.external_adapter.empty()) return solve_external(model, config);
  BranchAndBound search(model, config);
  return search.run();
}

Matching decode(const IpModel& model, std::span<const std::uint8_t> assignment) {
  Matching mu(model.num_children());
  for (ChildIndex c = 0; c < static_cast<ChildIndex>(model.num_children()); ++c) {
    bool set = false;
    for (int col : model.y_columns[c]) {
      if (!assignment[col]) continue;
      if (set) throw MatchError(ErrorCode::kMultiplePositionsSet, "child " + std::to_string(c) + " has two positions set");
      set = true;
      mu.assign(c, model.column_daycare[col]);
    }
  }
  return mu;
}

bool satisfies(const IpModel& model, std::span<const std::uint8_t> assignment) {
  if (assignment.size() != model.columns.size()) return false;
  for (const auto& row : model.rows) {
    long lhs = 0;
    for (const auto& t : row.terms) lhs += static_cast<long>(t.coef) * assignment[t.column];
    if (row.sense == Sense::kLessEqual && lhs > row.rhs) return false;
    if (row.sense == Sense::kEqual && lhs != row.rhs) return false;
    if (row.sense == Sense::kGreaterEqual && lhs < row.rhs) return false;
  }
  return true;
}

std::optional<std::vector<std::uint8_t>> encode(const Instance& inst, const IpModel& model, const Matching& mu) {
  std::vector<std::uint8_t> out(model.columns.size(), 0);
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const auto& fam = inst.family(f);
    const Tuple t = mu.family_tuple(inst, f);
    const auto rank = inst.tuple_rank(f, t);
    if (rank == Instance::npos) return std::nullopt;
    if (rank == fam.preference.size()) continue;  // omega(f) not listed: all unmatched
    for (ChildIndex c : fam.children) out[model.y_columns[c][rank]] = 1;
  }
  // Indicators take 1 wherever their link row allows it.
  for (int col = 0; col < static_cast<int>(model.columns.size()); ++col)
    if (model.columns[col].kind != VarKind::kY) out[col] = 1;
  for (const auto& row : model.rows) {
    if (row.tag != RowTag::kLinkBeta && row.tag != RowTag::kLinkGamma) continue;
    long lhs = 0;
    int indicator = -1;
    for (const auto& t : row.terms) {
      if (model.columns[t.column].kind != VarKind::kY) indicator = t.column;
      lhs += static_cast<long>(t.coef) * out[t.column];
    }
    if (lhs < row.rhs && indicator >= 0) out[indicator] = 0;
  }
  return out;
}

std::vector<SweepRow> relaxation_sweep(const Instance& inst, const SolverConfig& config) {
  std::vector<SweepRow> rows;
  for (int level = 0; level <= 3; ++level) {
    SweepRow row;
    row.level = level;
    row.result = solve(build_model(inst, IpLevel{level}), config);
    if (row.result.matching) row.report = build_report(inst, *row.result.matching);
    rows.push_back(std::move(row));
  }
  auto exact_value = [](const SolveResult& r) -> std::optional<int> {
    if (r.status == SolveStatus::kOptimal) return r.objective;
    if (r.status == SolveStatus::kInfeasible) return -1;
    return std::nullopt;
  };
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto a = exact_value(rows[i].result);
      const auto b = exact_value(rows[j].result);
      if (a && b && *b > *a)
        throw std::logic_error("level " + std::to_string(j) + " matches more children than level " + std::to_string(i));
    }
  }
  return rows;
}

}  // namespace daycare
