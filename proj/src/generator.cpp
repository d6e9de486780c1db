#include "daycare/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace daycare {

namespace {

// Mean of P(k) ~ q^(k-1) on {1, ..., cap}.
double truncated_mean(double q, int cap) {
  double num = 0.0, den = 0.0, w = 1.0;
  for (int k = 1; k <= cap; ++k, w *= q) {
    num += k * w;
    den += w;
  }
  return num / den;
}

// The mean is increasing in q on [0, 1]; bisect for the target.
double continuation_for_mean(double mean, int cap) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (truncated_mean(mid, cap) < mean ? lo : hi) = mid;
  }
  return lo;
}

// Distribution objects from <random> are implementation-defined; these keep
// generated files identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  std::size_t weighted(const std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double x = uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (x < w[i]) return i;
      x -= w[i];
    }
    return w.size() - 1;
  }

  // `count` draws from the geometric law on {1, ..., cap} whose truncated
  // mean is `mean`, stratified over quantiles and returned in random order.
  std::vector<int> stratified_lengths(double mean, int cap, std::size_t count) {
    std::vector<int> out(count, 1);
    if (cap > 1 && mean > 1.0) {
      const double q = continuation_for_mean(mean, cap);
      std::vector<double> cdf(static_cast<std::size_t>(cap));
      double x = 1.0, total = 0.0;
      for (auto& c : cdf) {
        total += x;
        c = total;
        x *= q;
      }
      for (std::size_t i = 0; i < count; ++i) {
        const double u = (static_cast<double>(i) + uniform()) / static_cast<double>(count) * total;
        out[i] = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
        out[i] = std::min(out[i], cap);
      }
    }
    shuffle(out);
    return out;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // k distinct indices, drawn proportionally to w without replacement.
  std::vector<std::size_t> sample_without_replacement(const std::vector<double>& w, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double u = 1.0 - uniform();
      if (w[i] > 0.0) keys.emplace_back(std::log(u) / w[i], i);
    }
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k && i < keys.size(); ++i) out.push_back(keys[i].second);
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

std::string padded(const char* prefix, std::size_t i, std::size_t n) {
  std::size_t width = 1;
  for (std::size_t m = n; m >= 10; m /= 10) ++width;
  std::string digits = std::to_string(i);
  return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

struct FamilyShape {
  int size = 1;
  bool twins = false;
};

// Number of distinct tuples reachable from a base list of m daycares.
std::size_t pool_size(std::size_t m, std::size_t k) {
  std::size_t distinct = 1;
  for (std::size_t i = 0; i < k; ++i) distinct *= (m > i ? m - i : 0);
  return m + distinct + k * m;
}

}  // namespace

void GenParams::validate() const {
  auto fail = [](const std::string& what) { throw MatchError(ErrorCode::kInfeasibleParams, what); };
  if (n_children < 0) fail("n_children must be non-negative");
  if (n_daycares < 1 && n_children > 0) fail("n_daycares must be positive");
  if (!in_unit(sibling_family_rate) || !in_unit(three_child_share) || !in_unit(twin_rate) || !in_unit(transfer_rate))
    fail("rates must lie in [0, 1]");
  if (twin_rate > sibling_family_rate) fail("twin_rate exceeds sibling_family_rate");
  double sum = 0.0;
  for (double g : grade_distribution) {
    if (!in_unit(g)) fail("grade fractions must lie in [0, 1]");
    sum += g;
  }
  if (std::abs(sum - 1.0) > 1e-6) fail("grade_distribution must sum to 1");
  for (double c : capacity_profile)
    if (c < 0.0) fail("capacity_profile entries must be non-negative");
  if (pref_len_single < 1.0 || pref_len_family < 1.0) fail("mean preference lengths must be at least 1");
  if (pref_max_single < 1 || pref_max_family < 1) fail("preference length caps must be at least 1");
  if (sibling_family_rate > 0.0) {
    std::size_t nonzero = 0;
    for (double g : grade_distribution) nonzero += g > 0.0;
    if (nonzero < 2) fail("sibling families need at least two grades");
  }
}

RawInstance generate_raw(const GenParams& params) {
  params.validate();
  Rng rng(params.seed);
  RawInstance raw;
  const auto n = static_cast<std::size_t>(params.n_children);
  if (n == 0) return raw;

  // Family sizes: F families, s*F with siblings, of which a share have three.
  const double s = params.sibling_family_rate;
  const double t = params.three_child_share;
  const auto num_families = static_cast<std::size_t>(std::llround(n / (1.0 + s + s * t)));
  const auto n_sib = static_cast<std::size_t>(std::llround(s * num_families));
  const auto n3 = static_cast<std::size_t>(std::llround(t * n_sib));
  const auto n2 = n_sib - n3;
  if (2 * n2 + 3 * n3 > n) throw MatchError(ErrorCode::kInfeasibleParams, "sibling families need more children than n_children");
  const std::size_t n1 = n - 2 * n2 - 3 * n3;
  const auto n_twin = std::min(n_sib, static_cast<std::size_t>(std::llround(params.twin_rate * (n1 + n_sib))));

  std::vector<FamilyShape> shapes;
  for (std::size_t i = 0; i < n3; ++i) shapes.push_back({3, false});
  for (std::size_t i = 0; i < n2; ++i) shapes.push_back({2, false});
  for (std::size_t i = 0; i < n_twin; ++i) shapes[i].twins = true;
  for (std::size_t i = 0; i < n1; ++i) shapes.push_back({1, false});
  rng.shuffle(shapes);

  const std::vector<double> grade_w(params.grade_distribution.begin(), params.grade_distribution.end());
  auto distinct_grades = [&](std::size_t k) {
    std::vector<Grade> out;
    for (auto i : rng.sample_without_replacement(grade_w, k)) out.push_back(static_cast<Grade>(i));
    return out;
  };

  std::size_t grades_available = 0;
  for (double g : grade_w) grades_available += g > 0.0;

  // Children and families.
  for (std::size_t fi = 0; fi < shapes.size(); ++fi) {
    RawFamily fam;
    fam.id = padded("f", fi + 1, shapes.size());
    std::vector<Grade> grades;
    if (shapes[fi].size == 1) {
      grades.push_back(static_cast<Grade>(rng.weighted(grade_w)));
    } else if (shapes[fi].twins || grades_available < static_cast<std::size_t>(shapes[fi].size)) {
      const auto g = distinct_grades(shapes[fi].size - 1);
      grades = {g[0], g[0]};
      if (shapes[fi].size == 3) grades.push_back(g[1]);
    } else {
      grades = distinct_grades(static_cast<std::size_t>(shapes[fi].size));
    }
    for (Grade g : grades) {
      RawChild c;
      c.id = padded("c", raw.children.size() + 1, n);
      c.family = fam.id;
      c.grade = g;
      fam.children.push_back(c.id);
      raw.children.push_back(std::move(c));
    }
    raw.families.push_back(std::move(fam));
  }

  // Physical daycares with a global popularity profile.
  const auto nd = static_cast<std::size_t>(params.n_daycares);
  std::vector<double> popularity(nd);
  {
    std::vector<std::size_t> order(nd);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t r = 0; r < nd; ++r) popularity[order[r]] = 1.0 / std::pow(static_cast<double>(r + 1), 0.6);
  }
  raw.daycares.resize(nd);
  for (std::size_t d = 0; d < nd; ++d) raw.daycares[d].id = padded("d", d + 1, nd);

  // Initial enrollments.
  const auto n_transfer = static_cast<std::size_t>(std::llround(params.transfer_rate * n));
  {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    for (std::size_t i = 0; i < n_transfer; ++i) raw.children[idx[i]].initial_daycare = raw.daycares[rng.weighted(popularity)].id;
  }

  // Per-grade quotas: supply = ratio * applicants, spread by popularity.
  std::array<std::size_t, kNumGrades> applicants{};
  for (const auto& c : raw.children) ++applicants[c.grade];
  for (auto& d : raw.daycares)
    for (Grade g = 0; g <= kMaxGrade; ++g)
      if (params.grade_distribution[g] > 0.0) d.grade_quotas[g] = 0;
  for (Grade g = 0; g <= kMaxGrade; ++g) {
    if (params.grade_distribution[g] <= 0.0) continue;
    const auto seats = static_cast<std::size_t>(std::llround(params.capacity_profile[g] * applicants[g]));
    for (std::size_t k = 0; k < seats; ++k) ++raw.daycares[rng.weighted(popularity)].grade_quotas[g];
  }

  // Preferences.
  std::map<std::string, std::size_t> child_pos;
  for (std::size_t i = 0; i < raw.children.size(); ++i) child_pos[raw.children[i].id] = i;
  const std::string sentinel(kUnmatchedId);

  std::size_t num_single = 0;
  for (const auto& fam : raw.families) num_single += fam.children.size() == 1;
  const auto single_len = rng.stratified_lengths(params.pref_len_single, std::min(params.pref_max_single, params.n_daycares),
                                                 num_single);
  const auto family_len = rng.stratified_lengths(params.pref_len_family, params.pref_max_family,
                                                 raw.families.size() - num_single);
  std::size_t next_single = 0, next_family = 0;

  for (auto& fam : raw.families) {
    const std::size_t k = fam.children.size();
    std::vector<double> w(nd);
    for (std::size_t d = 0; d < nd; ++d) w[d] = popularity[d] * (0.25 + rng.uniform());

    std::vector<std::string> omega;
    bool enrolled = false;
    for (const auto& cid : fam.children) {
      omega.push_back(raw.children[child_pos[cid]].initial_daycare);
      enrolled = enrolled || omega.back() != sentinel;
    }

    if (k == 1) {
      const int len = single_len[next_single++];
      if (enrolled) {
        // The current daycare occupies the last slot.
        std::vector<double> wo = w;
        const auto own = static_cast<std::size_t>(
            std::find_if(raw.daycares.begin(), raw.daycares.end(), [&](const auto& d) { return d.id == omega[0]; }) -
            raw.daycares.begin());
        wo[own] = 0.0;
        for (auto d : rng.sample_without_replacement(wo, static_cast<std::size_t>(len - 1)))
          fam.preference.push_back({raw.daycares[d].id});
        fam.preference.push_back(omega);
      } else {
        for (auto d : rng.sample_without_replacement(w, static_cast<std::size_t>(len)))
          fam.preference.push_back({raw.daycares[d].id});
      }
      continue;
    }

    const int target = family_len[next_family++];
    std::size_t m = 1;
    while (m < nd && pool_size(m, k) < static_cast<std::size_t>(target)) ++m;
    std::vector<std::string> base;
    for (auto d : rng.sample_without_replacement(w, m)) base.push_back(raw.daycares[d].id);

    const std::vector<std::vector<std::string>> individual(k, base);
    std::vector<std::size_t> precedence(k);
    std::iota(precedence.begin(), precedence.end(), 0);
    rng.shuffle(precedence);
    const auto same = expand_template(individual, PreferenceTemplate::kSameDaycareOnly);
    const auto templated = expand_template(individual, PreferenceTemplate::kSameThenPrecedence, precedence);

    std::vector<std::vector<std::string>> distinct;
    if (m >= k) {
      std::vector<std::size_t> idx(k);
      std::function<void(std::size_t, std::vector<bool>&)> rec = [&](std::size_t i, std::vector<bool>& used) {
        if (i == k) {
          std::vector<std::string> tuple;
          for (auto j : idx) tuple.push_back(base[j]);
          distinct.push_back(std::move(tuple));
          return;
        }
        for (std::size_t j = 0; j < m; ++j) {
          if (used[j]) continue;
          used[j] = true;
          idx[i] = j;
          rec(i + 1, used);
          used[j] = false;
        }
      };
      std::vector<bool> used(m, false);
      rec(0, used);
      rng.shuffle(distinct);
    }

    std::vector<std::vector<std::string>> pool = same;
    pool.insert(pool.end(), distinct.begin(), distinct.end());
    pool.insert(pool.end(), templated.begin() + static_cast<std::ptrdiff_t>(same.size()), templated.end());

    std::set<std::vector<std::string>> seen;
    for (const auto& tuple : pool) {
      if (fam.preference.size() + (enrolled ? 1 : 0) >= static_cast<std::size_t>(target)) break;
      if (tuple == omega || !seen.insert(tuple).second) continue;
      bool acceptable = true;
      for (std::size_t i = 0; i < k; ++i)
        if (omega[i] != sentinel && tuple[i] == sentinel) acceptable = false;
      if (acceptable) fam.preference.push_back(tuple);
    }
    if (enrolled) fam.preference.push_back(omega);
  }

  // Priorities: one uniform score per family, per-daycare noise, and a boost
  // that puts enrolled children above every applicant.
  std::map<std::string, double> family_score;
  for (const auto& fam : raw.families) family_score[fam.id] = 100.0 * rng.uniform();
  std::map<std::string, std::size_t> daycare_pos;
  for (std::size_t d = 0; d < nd; ++d) daycare_pos[raw.daycares[d].id] = d;
  for (const auto& fam : raw.families) {
    std::set<std::size_t> listed;
    for (const auto& tuple : fam.preference)
      for (const auto& d : tuple)
        if (d != sentinel) listed.insert(daycare_pos.at(d));
    for (std::size_t d : listed) {
      const double base = family_score[fam.id] + 2.0 * rng.uniform();
      for (const auto& cid : fam.children) {
        const bool own = raw.children[child_pos[cid]].initial_daycare == raw.daycares[d].id;
        raw.daycares[d].priority_scores[cid] = std::round((base + (own ? 1000.0 : 0.0)) * 1e4) / 1e4;
      }
    }
  }
  return raw;
}

Instance generate(const GenParams& params) { return validate_instance(generate_raw(params)); }

std::vector<std::string> preset_names() { return {"tama21", "tama22", "shibuya21", "shibuya22", "moriguchi21", "tiny"}; }

GenParams preset(const std::string& name) {
  // Family counts are encoded so that the rounding in generate_raw lands on
  // the published numbers of one-, two- and three-child families.
  auto make = [](int n, int nd, double families, double two, double three, double twins, double transfers,
                 std::array<double, kNumGrades> ages, std::array<double, kNumGrades> supply,
                 std::array<double, kNumGrades> demand, double len1, int max1, double lenf, int maxf) {
    GenParams p;
    p.n_children = n;
    p.n_daycares = nd;
    p.sibling_family_rate = (two + three) / families;
    p.three_child_share = (two + three) > 0 ? three / (two + three) : 0.0;
    p.twin_rate = twins / families;
    p.transfer_rate = transfers / n;
    const double total = std::accumulate(ages.begin(), ages.end(), 0.0);
    for (std::size_t g = 0; g < kNumGrades; ++g) {
      p.grade_distribution[g] = ages[g] / total;
      p.capacity_profile[g] = demand[g] > 0 ? supply[g] / demand[g] : 0.0;
    }
    p.pref_len_single = len1;
    p.pref_max_single = max1;
    p.pref_len_family = lenf;
    p.pref_max_family = maxf;
    return p;
  };

  if (name == "tama21")
    return make(635, 33, 587, 42, 3, 6, 61, {28.50, 40.47, 15.43, 11.81, 2.68, 1.10}, {241, 222, 123, 106, 57, 68},
                {181, 257, 98, 75, 17, 7}, 3.3, 15, 38.37, 1088);
  if (name == "tama22")
    return make(550, 33, 506, 44, 0, 8, 40, {32.91, 39.82, 16.55, 7.82, 1.45, 1.45}, {230, 212, 88, 83, 41, 58},
                {181, 219, 91, 43, 8, 8}, 3.0, 8, 8.4, 64);
  if (name == "shibuya21")
    return make(1589, 72, 1457, 120, 6, 18, 135, {35.81, 41.28, 10.76, 8.56, 2.33, 1.26},
                {509, 613, 239, 265, 268, 275}, {569, 656, 171, 136, 37, 20}, 4.45, 11, 14.95, 120);
  if (name == "shibuya22")
    return make(1372, 72, 1265, 101, 3, 28, 95, {39.36, 42.42, 9.77, 4.88, 2.40, 1.17},
                {497, 586, 186, 233, 255, 306}, {540, 582, 134, 67, 33, 16}, 3.78, 10, 6.58, 64);
  if (name == "moriguchi21")
    return make(915, 54, 845, 66, 2, 10, 95, {28.09, 38.69, 20.11, 9.72, 1.86, 1.53}, {369, 294, 156, 66, 38, 38},
                {257, 354, 184, 89, 17, 14}, 2.56, 5, 5.20, 24);
  if (name == "tiny") {
    GenParams p;
    p.n_children = 8;
    p.n_daycares = 2;
    p.sibling_family_rate = 0.3;
    p.three_child_share = 0.3;
    p.twin_rate = 0.15;
    p.transfer_rate = 0.15;
    p.grade_distribution = {0.5, 0.5, 0, 0, 0, 0};
    p.capacity_profile = {0.6, 0.6, 0, 0, 0, 0};
    p.pref_len_single = 1.8;
    p.pref_max_single = 2;
    p.pref_len_family = 4.0;
    p.pref_max_family = 6;
    return p;
  }
  throw MatchError(ErrorCode::kUnknownPreset, "unknown preset '" + name + "'");
}

}  // namespace daycare
