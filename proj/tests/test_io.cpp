#include <doctest.h>

#include "daycare/io.hpp"
#include "support.hpp"

using namespace daycare;
using daycare::testing::fixture;
using daycare::testing::load;

TEST_CASE("instance files round-trip") {
  GenParams p = preset("tiny");
  p.seed = 3;
  const RawInstance raw = generate_raw(p);
  const std::string once = dump(raw_instance_to_json(raw));
  const std::string twice = dump(raw_instance_to_json(raw_instance_from_json(Json::parse(once))));
  CHECK(once == twice);
}

TEST_CASE("validated instances re-serialize to an equivalent market") {
  const Instance inst = daycare::testing::tiny_instance(11);
  const Instance again = validate_instance(to_raw(inst));
  REQUIRE(again.num_children() == inst.num_children());
  for (std::size_t f = 0; f < inst.num_families(); ++f)
    CHECK(again.families()[f].preference == inst.families()[f].preference);
  for (std::size_t d = 0; d < inst.num_daycares(); ++d) {
    CHECK(again.quota(static_cast<DaycareIndex>(d)) == inst.quota(static_cast<DaycareIndex>(d)));
    for (ChildIndex a = 0; a < static_cast<ChildIndex>(inst.num_children()); ++a)
      for (ChildIndex b = 0; b < static_cast<ChildIndex>(inst.num_children()); ++b)
        if (inst.child(a).grade == inst.daycare(d).grade && inst.child(b).grade == inst.daycare(d).grade)
          CHECK(again.outranks(d, a, b) == inst.outranks(d, a, b));
  }
}

TEST_CASE("matching files round-trip") {
  const Instance inst = load("no_stable.json");
  Matching m(inst.num_children());
  m.assign(0, 0);
  m.assign(1, 0);
  const Json doc = matching_to_json(inst, m);
  CHECK(doc.dump() == R"({"assignments":{"c1":"d1","c2":"d1","c3":"UNMATCHED","c4":"UNMATCHED"}})");
  CHECK(matching_from_json(inst, doc) == m);
}

TEST_CASE("parse failures") {
  const Instance inst = load("no_stable.json");
  CHECK_THROWS_AS(matching_from_json(inst, Json::parse(R"({"assignments": {"zz": "d1"}})")), MatchError);
  CHECK_THROWS_AS(matching_from_json(inst, Json::parse(R"({"assignments": {"c1": "d9"}})")), MatchError);
  CHECK_THROWS_AS(matching_from_json(inst, Json::parse(R"([])")), MatchError);
  try {
    raw_instance_from_json(Json::parse(R"({"children": [{"id": "a"}], "families": [], "daycares": []})"));
    FAIL("accepted a child without a grade");
  } catch (const MatchError& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
  CHECK_THROWS_AS(read_instance(fixture("does_not_exist.json")), MatchError);
}

TEST_CASE("report carries the improving tuple") {
  const Instance inst = load("issue_nw.json");
  const Json report = report_to_json(inst, build_report(inst, read_matching(inst, fixture("issue_nw_mu.json"))));
  CHECK(report.at("non_wasteful") == false);
  CHECK(report.at("improving_moves").at(0).at("tuple") == Json::array({"d1", "d2"}));
  CHECK(report.at("improving_moves").at(0).at("rank") == 1);
}

TEST_CASE("csv import for single-child markets") {
  const auto dir = std::filesystem::temp_directory_path() / "daycare_csv_test";
  std::filesystem::create_directories(dir);
  write_text(dir / "children.csv", "child,grade,initial_daycare,preferences\na,0,,d1;d2\nb,0,d2,d1\n");
  write_text(dir / "daycares.csv", "daycare,grade,quota,priority\nd1,0,1,a;b\nd2,0,0,b\n");
  const Instance inst = validate_instance(import_csv(dir / "children.csv", dir / "daycares.csv"));
  CHECK(inst.num_families() == 2);
  CHECK(inst.family(1).preference.size() == 2);
  CHECK(inst.quota(*inst.find_daycare("d2")) == 1);
  CHECK(inst.outranks(0, 0, 1));
  std::filesystem::remove_all(dir);
}
