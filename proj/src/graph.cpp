#include "secmarkov/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "secmarkov/error.hpp"

namespace secmarkov {

using nlohmann::json;

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Start: return "start";
    case StateKind::Transient: return "transient";
    case StateKind::Goal: return "goal";
  }
  return "transient";
}

AttackGraph::AttackGraph(std::vector<Vulnerability> vulnerabilities, std::vector<State> states,
                         std::vector<Edge> edges)
    : vulnerabilities_(std::move(vulnerabilities)),
      states_(std::move(states)),
      edges_(std::move(edges)),
      out_(states_.size()),
      in_(states_.size()) {
  std::set<std::string_view> ids;
  for (const auto& s : states_) {
    if (!ids.insert(s.id).second) throw InputError("duplicate state id '" + s.id + "'");
    if (s.vulnerability && *s.vulnerability >= vulnerabilities_.size()) {
      throw InputError("state '" + s.id + "' references a vulnerability out of range");
    }
  }
  for (const auto& e : edges_) {
    if (e.from >= states_.size() || e.to >= states_.size()) {
      throw InputError("edge references a state index out of range");
    }
    out_[e.from].push_back(e.to);
    in_[e.to].push_back(e.from);
  }
  for (auto& v : out_) std::sort(v.begin(), v.end());
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

std::optional<std::size_t> AttackGraph::find(std::string_view id) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> AttackGraph::start() const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].kind == StateKind::Start) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> AttackGraph::goals() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].kind == StateKind::Goal) out.push_back(i);
  }
  return out;
}

const Vulnerability* AttackGraph::vulnerability_of(std::size_t state) const {
  const auto& s = states_.at(state);
  return s.vulnerability ? &vulnerabilities_[*s.vulnerability] : nullptr;
}

std::vector<Violation> validate(const AttackGraph& g) {
  std::vector<Violation> out;
  using Kind = Violation::Kind;

  std::vector<std::string> starts;
  for (const auto& s : g.states()) {
    if (s.kind == StateKind::Start) starts.push_back(s.id);
  }
  if (starts.size() != 1) {
    out.push_back({Kind::StartCount,
                   "expected exactly one start state, found " + std::to_string(starts.size()),
                   starts});
  }

  const auto goals = g.goals();
  if (goals.empty()) out.push_back({Kind::NoGoal, "graph has no goal state", {}});

  for (std::size_t i = 0; i < g.size(); ++i) {
    const State& s = g.state(i);
    switch (s.kind) {
      case StateKind::Start:
        if (!g.predecessors(i).empty()) {
          out.push_back({Kind::StartHasIncoming, "start state '" + s.id + "' has incoming edges",
                         {s.id}});
        }
        if (g.successors(i).empty()) {
          out.push_back({Kind::DeadEnd, "state '" + s.id + "' has no outgoing edges", {s.id}});
        }
        break;
      case StateKind::Transient:
        if (!s.vulnerability) {
          out.push_back({Kind::MissingVulnerability,
                         "transient state '" + s.id + "' is not bound to a vulnerability",
                         {s.id}});
        }
        if (g.successors(i).empty()) {
          out.push_back({Kind::DeadEnd, "state '" + s.id + "' has no outgoing edges", {s.id}});
        }
        break;
      case StateKind::Goal:
        if (!g.successors(i).empty()) {
          out.push_back({Kind::GoalHasOutgoing,
                         "goal state '" + s.id + "' has outgoing edges (must be absorbing)",
                         {s.id}});
        }
        break;
    }
    const auto succ = g.successors(i);
    for (std::size_t k = 1; k < succ.size(); ++k) {
      if (succ[k] == succ[k - 1]) {
        out.push_back({Kind::DuplicateEdge,
                       "duplicate edge '" + s.id + "' -> '" + g.state(succ[k]).id + "'",
                       {s.id, g.state(succ[k]).id}});
      }
    }
  }

  for (const auto& v : g.vulnerabilities()) {
    for (auto& problem : check_vulnerability(v)) {
      out.push_back({Kind::BadVulnerability, std::move(problem), {}});
    }
  }

  // Backward search from every goal.
  std::vector<bool> reaches(g.size(), false);
  std::deque<std::size_t> queue(goals.begin(), goals.end());
  for (auto gi : goals) reaches[gi] = true;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto u : g.predecessors(v)) {
      if (!reaches[u]) {
        reaches[u] = true;
        queue.push_back(u);
      }
    }
  }
  std::vector<std::string> stranded;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!reaches[i]) stranded.push_back(g.state(i).id);
  }
  if (!stranded.empty() && !goals.empty()) {
    std::string msg = "states cannot reach any goal:";
    for (const auto& id : stranded) msg += " " + id;
    out.push_back({Kind::GoalUnreachable, msg, stranded});
  }
  return out;
}

namespace {

void require_keys(const json& obj, std::string_view where,
                  std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw InputError(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError("unexpected key '" + key + "' in " + std::string(where));
    }
  }
}

std::string get_string(const json& obj, const char* key, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw InputError(std::string(where) + " requires string field '" + key + "'");
  }
  return it->get<std::string>();
}

std::optional<double> get_number(const json& obj, const char* key, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) {
    throw InputError(std::string(where) + " field '" + key + "' must be a number");
  }
  return it->get<double>();
}

Vulnerability parse_vulnerability(const json& rec, std::size_t index) {
  const std::string where = "vulnerabilities[" + std::to_string(index) + "]";
  require_keys(rec, where,
               {"cve_id", "host", "service", "disclosure_date", "cvss_vector", "exploitability",
                "impact", "exploit_maturity"});
  Vulnerability v;
  v.cve_id = get_string(rec, "cve_id", where);
  v.host = get_string(rec, "host", where);
  v.service = get_string(rec, "service", where);
  v.disclosure_date = Date::parse(get_string(rec, "disclosure_date", where));
  if (rec.contains("cvss_vector")) {
    v.base_vector = cvss::parse_vector(get_string(rec, "cvss_vector", where));
  }
  v.base_exploitability = get_number(rec, "exploitability", where);
  v.impact = get_number(rec, "impact", where);
  if (!v.base_vector && (!v.base_exploitability || !v.impact)) {
    throw InputError(where + " (" + v.cve_id +
                     ") needs either 'cvss_vector' or both 'exploitability' and 'impact'");
  }
  if (rec.contains("exploit_maturity")) {
    v.exploit_maturity = cvss::parse_maturity(get_string(rec, "exploit_maturity", where));
  }
  return v;
}

StateKind parse_kind(const std::string& text, const std::string& where) {
  if (text == "start") return StateKind::Start;
  if (text == "transient") return StateKind::Transient;
  if (text == "goal") return StateKind::Goal;
  throw InputError(where + " has unknown kind '" + text + "', expected start|transient|goal");
}

}  // namespace

AttackGraph parse_graph(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("graph document is not valid JSON: ") + e.what());
  }
  require_keys(doc, "graph document", {"name", "scan_date", "vulnerabilities", "states", "edges"});
  for (const char* key : {"vulnerabilities", "states", "edges"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw InputError(std::string("graph document requires array '") + key + "'");
    }
  }

  std::vector<Vulnerability> vulns;
  std::map<std::pair<std::string, std::string>, std::size_t> by_cve_host;
  std::multimap<std::string, std::size_t> by_cve;
  for (const auto& rec : doc["vulnerabilities"]) {
    auto v = parse_vulnerability(rec, vulns.size());
    if (!by_cve_host.emplace(std::pair{v.cve_id, v.host}, vulns.size()).second) {
      throw InputError("duplicate vulnerability record " + v.cve_id + " on host " + v.host);
    }
    by_cve.emplace(v.cve_id, vulns.size());
    vulns.push_back(std::move(v));
  }

  std::vector<State> states;
  for (const auto& rec : doc["states"]) {
    const std::string where = "states[" + std::to_string(states.size()) + "]";
    require_keys(rec, where, {"id", "kind", "cve_id", "host", "reward"});
    State s;
    s.id = get_string(rec, "id", where);
    s.kind = parse_kind(get_string(rec, "kind", where), where);
    if (rec.contains("cve_id")) {
      if (s.kind == StateKind::Start) {
        throw InputError("start state '" + s.id + "' cannot carry a vulnerability");
      }
      const auto cve = get_string(rec, "cve_id", where);
      if (rec.contains("host")) {
        const auto host = get_string(rec, "host", where);
        const auto it = by_cve_host.find({cve, host});
        if (it == by_cve_host.end()) {
          throw InputError("state '" + s.id + "' references unknown vulnerability " + cve +
                           " on host " + host);
        }
        s.vulnerability = it->second;
      } else {
        const auto n = by_cve.count(cve);
        if (n == 0) {
          throw InputError("state '" + s.id + "' references unknown vulnerability " + cve);
        }
        if (n > 1) {
          throw InputError("state '" + s.id + "' references " + cve +
                           ", which exists on several hosts; add a 'host' field");
        }
        s.vulnerability = by_cve.find(cve)->second;
      }
    } else if (rec.contains("host")) {
      throw InputError(where + " has 'host' without 'cve_id'");
    }
    if (rec.contains("reward")) {
      if (s.kind != StateKind::Goal) {
        throw InputError("state '" + s.id + "': 'reward' is only allowed on goal states");
      }
      s.reward = get_number(rec, "reward", where);
    }
    states.push_back(std::move(s));
  }

  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!index.emplace(states[i].id, i).second) {
      throw InputError("duplicate state id '" + states[i].id + "'");
    }
  }

  std::vector<Edge> edges;
  for (const auto& rec : doc["edges"]) {
    if (!rec.is_array() || rec.size() != 2 || !rec[0].is_string() || !rec[1].is_string()) {
      throw InputError("edges[" + std::to_string(edges.size()) +
                       "] must be a [from_id, to_id] pair of strings");
    }
    Edge e;
    for (int end = 0; end < 2; ++end) {
      const auto id = rec[end].get<std::string>();
      const auto it = index.find(id);
      if (it == index.end()) throw InputError("edge references unknown state id '" + id + "'");
      (end == 0 ? e.from : e.to) = it->second;
    }
    edges.push_back(e);
  }

  AttackGraph g(std::move(vulns), std::move(states), std::move(edges));
  if (doc.contains("name")) g.name = get_string(doc, "name", "graph document");
  if (doc.contains("scan_date")) {
    g.scan_date = Date::parse(get_string(doc, "scan_date", "graph document"));
  }
  return g;
}

AttackGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

namespace {

AttackGraph checked(AttackGraph g) {
  const auto violations = validate(g);
  if (!violations.empty()) {
    std::vector<std::string> messages;
    for (const auto& v : violations) messages.push_back(v.message);
    throw ValidationError(std::move(messages));
  }
  return g;
}

}  // namespace

AttackGraph load_graph_text(std::string_view json_text) { return checked(parse_graph(json_text)); }

AttackGraph load_graph(const std::filesystem::path& path) { return checked(read_graph(path)); }

std::string save_graph(const AttackGraph& g) {
  json doc = json::object();
  if (!g.name.empty()) doc["name"] = g.name;
  if (g.scan_date) doc["scan_date"] = g.scan_date->to_string();

  json vulns = json::array();
  for (const auto& v : g.vulnerabilities()) {
    json rec = {{"cve_id", v.cve_id}, {"host", v.host}, {"service", v.service}};
    if (v.disclosure_date) rec["disclosure_date"] = v.disclosure_date->to_string();
    if (v.base_vector) rec["cvss_vector"] = cvss::to_string(*v.base_vector);
    if (v.base_exploitability) rec["exploitability"] = *v.base_exploitability;
    if (v.impact) rec["impact"] = *v.impact;
    if (v.exploit_maturity) rec["exploit_maturity"] = cvss::to_string(*v.exploit_maturity);
    vulns.push_back(std::move(rec));
  }
  doc["vulnerabilities"] = std::move(vulns);

  json states = json::array();
  for (const auto& s : g.states()) {
    json rec = {{"id", s.id}, {"kind", to_string(s.kind)}};
    if (s.vulnerability) {
      const auto& v = g.vulnerabilities()[*s.vulnerability];
      rec["cve_id"] = v.cve_id;
      rec["host"] = v.host;
    }
    if (s.reward) rec["reward"] = *s.reward;
    states.push_back(std::move(rec));
  }
  doc["states"] = std::move(states);

  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({g.state(e.from).id, g.state(e.to).id});
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

}  // namespace secmarkov
