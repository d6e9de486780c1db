#include <doctest.h>

#include "daycare/oracle.hpp"
#include "daycare/properties.hpp"
#include "goldens.hpp"

using namespace daycare;
using daycare::testing::fixture;
using daycare::testing::load;
using daycare::testing::matching;

TEST_CASE("family non-wastefulness worked example") {
  const Instance inst = load("issue_nw.json");
  const Matching mu = read_matching(inst, fixture("issue_nw_mu.json"));
  const Matching mu_prime = read_matching(inst, fixture("issue_nw_mu_prime.json"));

  const auto nw = check_family_nonwasteful(inst, mu);
  REQUIRE_FALSE(nw.non_wasteful);
  REQUIRE(nw.moves.size() == 1);
  CHECK(render_tuple(inst, inst.family(0).preference[nw.moves[0].tuple_position]) == "(d1, d2)");
  CHECK(check_family_rational(inst, mu).rational);
  CHECK(check_feasible(inst, mu).feasible);

  const auto nw_prime = check_family_nonwasteful(inst, mu_prime);
  CHECK(nw_prime.non_wasteful);
  CHECK(build_report(inst, mu_prime).all_hold());
  CHECK(daycare::testing::render_issue_nw_example() == daycare::testing::golden("issue_nw.txt"));
}

TEST_CASE("each maximal outcome of the counter-example is blocked as in the proof") {
  const Instance inst = load("no_stable.json");
  struct Case {
    const char* outcome;
    const char* family;
    const char* tuple;
    int lambda;
  };
  const Case cases[] = {
      {R"({"assignments": {"c1": "d1", "c2": "d1", "c3": "d2"}})", "f3", "(d2)", 0},
      {R"({"assignments": {"c1": "d1", "c2": "d1", "c4": "d2"}})", "f2", "(d1)", 1},
      {R"({"assignments": {"c4": "d1", "c3": "d2"}})", "f1", "(d1, d1)", 0},
      {R"({"assignments": {"c4": "d1", "c3": "d1"}})", "f2", "(d2)", 0},
      {R"({"assignments": {"c3": "d1", "c4": "d2"}})", "f3", "(d1)", 1},
  };
  for (const auto& c : cases) {
    CAPTURE(c.outcome);
    const Matching mu = matching(inst, c.outcome);
    const auto witnesses = find_blocking_coalitions(inst, mu);
    const auto it = std::find_if(witnesses.begin(), witnesses.end(), [&](const BlockingWitness& w) {
      return inst.family(w.family).id == c.family &&
             render_tuple(inst, inst.family(w.family).preference[w.tuple_position]) == c.tuple;
    });
    REQUIRE(it != witnesses.end());
    CHECK(it->entries.size() == 1);
    CHECK(it->entries[0].lambda == c.lambda);
    CHECK(replay_witness(inst, mu, *it));
    CHECK_FALSE(check_stable(inst, mu).stable);
  }
}

TEST_CASE("feasibility and rationality failures") {
  const Instance inst = load("no_stable.json");
  const Matching over = matching(inst, R"({"assignments": {"c1": "d1", "c2": "d1", "c3": "d1"}})");
  CHECK_FALSE(check_feasible(inst, over).feasible);
  CHECK_FALSE(build_report(inst, over).all_hold());

  // A split twin pair holds no ranked tuple.
  const Matching split = matching(inst, R"({"assignments": {"c1": "d1"}})");
  CHECK_FALSE(check_feasible(inst, split).feasible);

  RawInstance raw;
  raw.children = {{"a", "f", 0, "d2"}};
  raw.families = {{"f", {"a"}, {{"d1"}}}};
  raw.daycares = {{"d1", 0, 1, {}, {}}, {"d2", 0, 0, {}, {{"a", 1.0}}}};
  const Instance enrolled = validate_instance(raw);
  Matching dropped(enrolled.num_children());
  const auto fr = check_family_rational(enrolled, dropped);
  CHECK_FALSE(fr.rational);
  CHECK(fr.violators == std::vector<FamilyIndex>{0});
  Matching stay(enrolled.num_children());
  stay.assign(0, 1);
  CHECK(check_family_rational(enrolled, stay).rational);
  // The freed seat at d1 is open, so staying is wasteful.
  CHECK_FALSE(check_family_nonwasteful(enrolled, stay).non_wasteful);
}

TEST_CASE("restricted blocking definitions agree with the general one") {
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = daycare::testing::tiny_instance(seed);
    enumerate_outcomes(inst, {}, [&](const Matching& mu) {
      const auto witnesses = find_blocking_coalitions(inst, mu);
      for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
        for (std::size_t p = 0; p < inst.family(f).preference.size(); ++p) {
          const bool general = std::any_of(witnesses.begin(), witnesses.end(), [&](const BlockingWitness& w) {
            return w.family == f && w.tuple_position == p;
          });
          bool restricted = false;
          switch (classify_tuple(inst, f, inst.family(f).preference[p])) {
            case BlockingKind::kOnlyChild: restricted = blocks_only_child(inst, mu, f, p); break;
            case BlockingKind::kTwins: restricted = blocks_twins(inst, mu, f, p); break;
            case BlockingKind::kDistinct: restricted = blocks_distinct(inst, mu, f, p); break;
            case BlockingKind::kMixed: restricted = blocks_mixed(inst, mu, f, p); break;
            case BlockingKind::kGeneral: restricted = general; break;
          }
          CHECK(restricted == general);
          ++compared;
        }
      }
      for (const auto& w : witnesses) CHECK(replay_witness(inst, mu, w));
    });
  }
  CHECK(compared > 1000);
}

TEST_CASE("stable outcomes are non-wasteful") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = daycare::testing::tiny_instance(seed);
    const auto report = stable_set(inst);
    CHECK(report.stable_but_wasteful == 0);
    for (const auto& mu : report.stable) CHECK(check_family_nonwasteful(inst, mu).non_wasteful);
  }
}

TEST_CASE("comparison of identical outcomes") {
  const Instance inst = load("issue_nw.json");
  const Matching mu = read_matching(inst, fixture("issue_nw_mu.json"));
  const auto cmp = compare_outcomes(inst, mu, mu);
  CHECK(report_to_json(inst, cmp.a) == report_to_json(inst, cmp.b));
}
