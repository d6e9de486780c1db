#include "daycare/io.hpp"

#include <fstream>
#include <sstream>

namespace daycare {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw MatchError(ErrorCode::kParse, what); }

template <class T>
T field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(where + ": field '" + key + "': " + e.what());
  }
}

const Json& array_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(std::string("missing top-level array '") + key + "'");
  if (!it->is_array()) parse_error(std::string("'") + key + "' must be an array");
  return *it;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, std::size_t columns) {
  std::istringstream in(read_text(path));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto cells = split(line, ',');
    for (auto& c : cells) c = trim(c);
    while (cells.size() < columns) cells.emplace_back();
    if (cells.size() != columns)
      parse_error(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
    rows.push_back(std::move(cells));
  }
  return rows;
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_error(where + ": not an integer: '" + s + "'");
  }
}

}  // namespace

RawInstance raw_instance_from_json(const Json& doc) {
  if (!doc.is_object()) parse_error("instance must be a JSON object");
  RawInstance raw;
  for (const auto& c : array_field(doc, "children")) {
    RawChild rc;
    rc.id = field<std::string>(c, "id", "child");
    const std::string where = "child '" + rc.id + "'";
    rc.family = c.contains("family") ? field<std::string>(c, "family", where) : std::string();
    rc.grade = field<Grade>(c, "grade", where);
    if (c.contains("initial_daycare")) rc.initial_daycare = field<std::string>(c, "initial_daycare", where);
    raw.children.push_back(std::move(rc));
  }
  for (const auto& f : array_field(doc, "families")) {
    RawFamily rf;
    rf.id = field<std::string>(f, "id", "family");
    const std::string where = "family '" + rf.id + "'";
    rf.children = field<std::vector<std::string>>(f, "children", where);
    rf.preference = field<std::vector<std::vector<std::string>>>(f, "preferences", where);
    raw.families.push_back(std::move(rf));
  }
  for (const auto& d : array_field(doc, "daycares")) {
    RawDaycare rd;
    rd.id = field<std::string>(d, "id", "daycare");
    const std::string where = "daycare '" + rd.id + "'";
    if (d.contains("grade_quotas")) {
      const auto& gq = d.at("grade_quotas");
      if (!gq.is_object()) parse_error(where + ": 'grade_quotas' must be an object");
      for (const auto& [g, q] : gq.items()) {
        if (!q.is_number_integer()) parse_error(where + ": grade quota must be an integer");
        rd.grade_quotas[parse_int(g, where)] = q.get<int>();
      }
      if (rd.grade_quotas.empty()) parse_error(where + ": 'grade_quotas' is empty");
    } else {
      rd.grade = field<Grade>(d, "grade", where);
      rd.new_applicant_quota = field<int>(d, "new_applicant_quota", where);
    }
    if (d.contains("priority_scores")) {
      const auto& ps = d.at("priority_scores");
      if (!ps.is_object()) parse_error(where + ": 'priority_scores' must be an object");
      for (const auto& [cid, s] : ps.items()) {
        if (!s.is_number()) parse_error(where + ": score for '" + cid + "' is not a number");
        rd.priority_scores[cid] = s.get<double>();
      }
    }
    raw.daycares.push_back(std::move(rd));
  }
  return raw;
}

Json raw_instance_to_json(const RawInstance& raw) {
  Json doc = Json::object();
  Json children = Json::array();
  for (const auto& c : raw.children)
    children.push_back({{"id", c.id}, {"family", c.family}, {"grade", c.grade}, {"initial_daycare", c.initial_daycare}});
  Json families = Json::array();
  for (const auto& f : raw.families)
    families.push_back({{"id", f.id}, {"children", f.children}, {"preferences", f.preference}});
  Json daycares = Json::array();
  for (const auto& d : raw.daycares) {
    Json obj = {{"id", d.id}};
    if (!d.grade_quotas.empty()) {
      Json gq = Json::object();
      for (const auto& [g, q] : d.grade_quotas) gq[std::to_string(g)] = q;
      obj["grade_quotas"] = gq;
    } else {
      obj["grade"] = d.grade.value_or(0);
      obj["new_applicant_quota"] = d.new_applicant_quota;
    }
    Json scores = Json::object();
    for (const auto& [cid, s] : d.priority_scores) scores[cid] = s;
    obj["priority_scores"] = scores;
    daycares.push_back(std::move(obj));
  }
  doc["children"] = std::move(children);
  doc["families"] = std::move(families);
  doc["daycares"] = std::move(daycares);
  return doc;
}

RawInstance to_raw(const Instance& inst) {
  RawInstance raw;
  for (const auto& c : inst.children())
    raw.children.push_back({c.id, inst.family(c.family).id, c.grade, inst.daycare_name(c.initial)});
  for (const auto& f : inst.families()) {
    RawFamily rf;
    rf.id = f.id;
    for (ChildIndex c : f.children) rf.children.push_back(inst.child(c).id);
    for (const auto& t : f.preference) {
      std::vector<std::string> names;
      for (DaycareIndex d : t) names.push_back(inst.daycare_name(d));
      rf.preference.push_back(std::move(names));
    }
    raw.families.push_back(std::move(rf));
  }
  const auto n = static_cast<double>(inst.num_children());
  for (const auto& d : inst.daycares()) {
    RawDaycare rd;
    rd.id = d.id;
    rd.grade = d.grade;
    rd.new_applicant_quota = d.new_applicant_quota;
    // Only same-grade children can meet at d, so only their order matters.
    for (std::size_t c = 0; c < inst.num_children(); ++c)
      if (inst.children()[c].grade == d.grade) rd.priority_scores[inst.children()[c].id] = n - d.rank[c];
    raw.daycares.push_back(std::move(rd));
  }
  return raw;
}

RawInstance read_raw_instance(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
  return raw_instance_from_json(doc);
}

Instance read_instance(const std::filesystem::path& path) { return validate_instance(read_raw_instance(path)); }

Matching matching_from_json(const Instance& inst, const Json& doc) {
  if (!doc.is_object() || !doc.contains("assignments") || !doc.at("assignments").is_object())
    parse_error("matching must be an object with an 'assignments' object");
  Matching mu(inst.num_children());
  for (const auto& [cid, d] : doc.at("assignments").items()) {
    const auto c = inst.find_child(cid);
    if (!c) throw MatchError(ErrorCode::kUnknownChild, "matching assigns unknown child '" + cid + "'");
    if (!d.is_string()) parse_error("assignment of '" + cid + "' must be a string");
    const auto dc = inst.find_daycare(d.get<std::string>());
    if (!dc) throw MatchError(ErrorCode::kUnknownDaycare, "matching uses unknown daycare '" + d.get<std::string>() + "'");
    mu.assign(*c, *dc);
  }
  return mu;
}

Json matching_to_json(const Instance& inst, const Matching& mu) {
  Json assignments = Json::object();
  for (std::size_t c = 0; c < inst.num_children(); ++c)
    assignments[inst.children()[c].id] = inst.daycare_name(mu[static_cast<ChildIndex>(c)]);
  return {{"assignments", assignments}};
}

Matching read_matching(const Instance& inst, const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
  return matching_from_json(inst, doc);
}

Json tuple_to_json(const Instance& inst, const Tuple& t) {
  Json out = Json::array();
  for (DaycareIndex d : t) out.push_back(inst.daycare_name(d));
  return out;
}

Json witness_to_json(const Instance& inst, const BlockingWitness& w) {
  Json entries = Json::array();
  for (const auto& e : w.entries)
    entries.push_back({{"daycare", inst.daycare_name(e.daycare)},
                       {"lambda", e.lambda},
                       {"capacity", e.capacity},
                       {"demanders", e.demanders}});
  return {{"family", inst.family(w.family).id},
          {"rank", w.tuple_position + 1},
          {"tuple", tuple_to_json(inst, inst.family(w.family).preference.at(w.tuple_position))},
          {"kind", std::string(to_string(w.kind))},
          {"entries", entries}};
}

Json report_to_json(const Instance& inst, const PropertyReport& report) {
  Json violators = Json::array();
  for (FamilyIndex f : report.rationality.violators) violators.push_back(inst.family(f).id);
  Json moves = Json::array();
  for (const auto& m : report.non_wastefulness.moves)
    moves.push_back({{"family", inst.family(m.family).id},
                     {"rank", m.tuple_position + 1},
                     {"tuple", tuple_to_json(inst, inst.family(m.family).preference.at(m.tuple_position))}});
  Json witnesses = Json::array();
  for (const auto& w : report.stability.witnesses) witnesses.push_back(witness_to_json(inst, w));
  return {{"feasible", report.feasibility.feasible},
          {"family_rational", report.rationality.rational},
          {"non_wasteful", report.non_wastefulness.non_wasteful},
          {"stable", report.stability.stable},
          {"matched", report.matched_count},
          {"blocking_count", report.blocking_count},
          {"feasibility_violations", report.feasibility.violations},
          {"rationality_violators", violators},
          {"improving_moves", moves},
          {"blocking_coalitions", witnesses}};
}

Json stats_to_json(const ModelStats& stats) {
  Json vars = Json::object();
  for (const auto& [k, v] : stats.variables) vars[k] = v;
  Json rows = Json::object();
  for (const auto& [k, v] : stats.constraints) rows[k] = v;
  return {{"variables", vars}, {"constraints", rows}, {"nonzeros", stats.nonzeros}};
}

Json solve_report_to_json(const Instance& inst, int level, const SolveResult& result, bool with_timing) {
  Json doc = {{"level", level}, {"status", std::string(to_string(result.status))}, {"objective", result.objective}};
  if (result.matching) {
    const Json report = report_to_json(inst, build_report(inst, *result.matching));
    for (const auto& [key, value] : report.items()) doc[key] = value;
  }
  doc["solver"] = {{"nodes", result.stats.nodes}, {"incumbents", result.stats.incumbents}};
  if (with_timing) doc["timing"] = {{"runtime_seconds", result.stats.runtime_seconds}};
  return doc;
}

Json enumeration_to_json(const Instance& inst, const EnumerationReport& report) {
  Json stable = Json::array();
  for (const auto& mu : report.stable) stable.push_back(matching_to_json(inst, mu)["assignments"]);
  Json optimum = Json::object();
  for (const auto& [level, best] : report.level_optimum)
    optimum["IP-" + std::to_string(level)] = best ? Json(*best) : Json(nullptr);
  Json certificate = Json::array();
  for (const auto& entry : report.nonexistence_certificate)
    certificate.push_back({{"outcome", matching_to_json(inst, entry.outcome)["assignments"]},
                           {"blocked_by", witness_to_json(inst, entry.witness)}});
  return {{"outcomes", report.total_outcomes},
          {"stable_count", report.stable.size()},
          {"stable", stable},
          {"level_optimum", optimum},
          {"nonexistence_certificate", certificate},
          {"stable_but_wasteful", report.stable_but_wasteful}};
}

RawInstance import_csv(const std::filesystem::path& children_csv, const std::filesystem::path& daycares_csv) {
  RawInstance raw;
  for (const auto& row : read_csv(children_csv, 4)) {
    RawChild c;
    c.id = row[0];
    c.family = "f_" + row[0];
    c.grade = parse_int(row[1], "child '" + row[0] + "'");
    if (!row[2].empty()) c.initial_daycare = row[2];
    RawFamily f;
    f.id = c.family;
    f.children = {c.id};
    for (const auto& d : split(row[3], ';'))
      if (!trim(d).empty()) f.preference.push_back({trim(d)});
    raw.children.push_back(std::move(c));
    raw.families.push_back(std::move(f));
  }
  for (const auto& row : read_csv(daycares_csv, 4)) {
    RawDaycare d;
    d.id = row[0];
    d.grade = parse_int(row[1], "daycare '" + row[0] + "'");
    d.new_applicant_quota = parse_int(row[2], "daycare '" + row[0] + "'");
    std::vector<std::string> order;
    for (const auto& c : split(row[3], ';'))
      if (!trim(c).empty()) order.push_back(trim(c));
    for (std::size_t i = 0; i < order.size(); ++i) d.priority_scores[order[i]] = static_cast<double>(order.size() - i);
    raw.daycares.push_back(std::move(d));
  }
  return raw;
}

std::string render_tuple(const Instance& inst, const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? ", " : "") + inst.daycare_name(t[i]);
  return out + ")";
}

std::string render_matching(const Instance& inst, const Matching& mu) {
  std::string out;
  for (std::size_t c = 0; c < inst.num_children(); ++c)
    out += (c ? " " : "") + inst.children()[c].id + "=" + inst.daycare_name(mu[static_cast<ChildIndex>(c)]);
  return out;
}

std::string render_witness(const Instance& inst, const BlockingWitness& w) {
  std::string out = inst.family(w.family).id + " blocks with " +
                    render_tuple(inst, inst.family(w.family).preference.at(w.tuple_position)) + " [" +
                    std::string(to_string(w.kind)) + "]";
  for (const auto& e : w.entries)
    out += "; " + inst.daycare_name(e.daycare) + ": lambda=" + std::to_string(e.lambda) +
           " <= " + std::to_string(e.capacity) + "-" + std::to_string(e.demanders);
  return out;
}

std::string render_enumeration(const Instance& inst, const EnumerationReport& report) {
  std::string out;
  if (report.stable.empty()) {
    out = "stable set: EMPTY\n";
    for (const auto& entry : report.nonexistence_certificate)
      out += render_matching(inst, entry.outcome) + " | " + render_witness(inst, entry.witness) + "\n";
  } else {
    out = "stable set: " + std::to_string(report.stable.size()) + "\n";
    for (const auto& mu : report.stable) out += render_matching(inst, mu) + "\n";
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace daycare
