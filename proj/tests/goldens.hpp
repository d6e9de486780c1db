#pragma once

#include <string>

#include "daycare/properties.hpp"
#include "support.hpp"

// Text renderings of the worked examples, compared byte for byte against
// tests/fixtures/golden. Shared by the unit tests and the acceptance run.
namespace daycare::testing {

inline std::string golden(const std::string& name) { return read_text(fixture("golden/" + name)); }

inline std::string render_lambda_example() {
  const Instance inst = load("lambda.json");
  const Matching mu = read_matching(inst, fixture("lambda_mu.json"));
  const std::vector<ChildIndex> reference = {*inst.find_child("c2"), *inst.find_child("c4")};
  const std::vector<ChildIndex> excluded = {*inst.find_child("c4")};
  return std::to_string(lambda_count(inst, mu, *inst.find_daycare("d"), reference, excluded)) + "\n";
}

inline std::string render_demand_table_example() {
  const Instance inst = load("demand_table.json");
  std::string text;
  for (const auto& e : demand_table(inst, 0, inst.family(0).preference[0])) {
    text += (text.empty() ? "(" : ", (") + inst.daycare_name(e.daycare) + ": {";
    for (std::size_t i = 0; i < e.demanders.size(); ++i) text += (i ? ", " : "") + inst.child(e.demanders[i]).id;
    text += "})";
  }
  return text + "\n";
}

// The dummy daycare is written d0.
inline std::string render_projection_example() {
  const Json doc = Json::parse(read_text(fixture("projection.json")));
  const auto individual = doc.at("individual").get<std::vector<std::vector<std::string>>>();
  const auto precedence = doc.at("precedence").get<std::vector<std::size_t>>();
  const auto ranking = expand_template(individual, PreferenceTemplate::kSameThenPrecedence, precedence);
  auto name = [](const std::string& d) { return d == kUnmatchedId ? std::string("d0") : d; };

  std::string text = "f: ";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    text += (i ? ", (" : "(");
    for (std::size_t j = 0; j < ranking[i].size(); ++j) text += (j ? ", " : "") + name(ranking[i][j]);
    text += ")";
  }
  text += "\n";

  RawInstance raw;
  raw.children = {{"c1", "f", 0, std::string(kUnmatchedId)}, {"c2", "f", 0, std::string(kUnmatchedId)}};
  raw.families = {{"f", {"c1", "c2"}, ranking}};
  raw.daycares = {{"d1", 0, 2, {}, {}}, {"d2", 0, 2, {}, {}}};
  const Instance inst = validate_instance(raw);
  const auto projected = project_preferences(inst.family(0));
  for (std::size_t i = 0; i < projected.size(); ++i) {
    text += inst.child(static_cast<ChildIndex>(i)).id + ": ";
    for (std::size_t p = 0; p < projected[i].size(); ++p)
      text += (p ? ", " : "") + name(inst.daycare_name(projected[i][p]));
    text += "\n";
  }
  return text;
}

inline std::string render_issue_nw_example() {
  const Instance inst = load("issue_nw.json");
  auto line = [&](const std::string& label, const std::string& file) {
    const auto nw = check_family_nonwasteful(inst, read_matching(inst, fixture(file)));
    std::string text = label + ": non_wasteful=" + (nw.non_wasteful ? "true" : "false");
    for (const auto& m : nw.moves)
      text += " improving=" + inst.family(m.family).id + " " +
              render_tuple(inst, inst.family(m.family).preference[m.tuple_position]);
    return text + "\n";
  };
  return line("mu", "issue_nw_mu.json") + line("mu'", "issue_nw_mu_prime.json");
}

}  // namespace daycare::testing
