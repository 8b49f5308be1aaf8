#include "secmarkov/topology.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace secmarkov {

namespace {

bool is_local(const Vulnerability& v) {
  return v.base_vector && v.base_vector->access_vector == cvss::AccessVector::Local;
}

bool grants_root(const Vulnerability& v, const std::string& goal_host) {
  const auto impact = v.impact_score();
  return v.host == goal_host && impact && *impact >= kRootImpact;
}

}  // namespace

AttackGraph build_from_topology(const Topology& topo) {
  const std::set<std::string> hosts(topo.hosts.begin(), topo.hosts.end());
  for (const auto& v : topo.vulnerabilities) {
    if (!hosts.contains(v.host)) {
      throw InputError("vulnerability " + v.cve_id + " is on unknown host " + v.host);
    }
  }
  for (const auto& c : topo.reachability) {
    if (!hosts.contains(c.from_host) || !hosts.contains(c.to.host)) {
      throw InputError("connectivity " + c.from_host + " -> " + c.to.host + ":" + c.to.service +
                       " names an unknown host");
    }
  }
  const auto& vulns = topo.vulnerabilities;
  const std::size_t n = vulns.size();

  const bool entry_exists = std::any_of(vulns.begin(), vulns.end(), [&](const auto& v) {
    return v.host == topo.entry.host && v.service == topo.entry.service;
  });
  if (!entry_exists) {
    throw InputError("entry service " + topo.entry.service + " on " + topo.entry.host +
                     " has no vulnerability");
  }
  if (std::none_of(vulns.begin(), vulns.end(),
                   [&](const auto& v) { return v.host == topo.goal_host; })) {
    throw InputError("goal host " + topo.goal_host + " hosts no vulnerability");
  }

  std::set<std::pair<std::string, std::pair<std::string, std::string>>> links;
  for (const auto& c : topo.reachability) {
    links.insert({c.from_host, {c.to.host, c.to.service}});
  }
  auto reaches = [&](const std::string& from_host, const Vulnerability& v) {
    if (from_host == v.host) return true;
    return !is_local(v) && links.contains({from_host, {v.host, v.service}});
  };

  // Candidate states 0..n-1 are vulnerabilities; n is start, n+1 is goal.
  const std::size_t start = n;
  const std::size_t goal = n + 1;
  std::vector<std::vector<std::size_t>> out(n + 2);
  for (std::size_t j = 0; j < n; ++j) {
    if (vulns[j].host == topo.entry.host && vulns[j].service == topo.entry.service &&
        !is_local(vulns[j])) {
      out[start].push_back(j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (grants_root(vulns[i], topo.goal_host)) {
      out[i].push_back(goal);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && reaches(vulns[i].host, vulns[j])) out[i].push_back(j);
    }
  }

  std::vector<bool> forward(n + 2, false);
  std::deque<std::size_t> queue{start};
  forward[start] = true;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : out[u]) {
      if (!forward[v]) {
        forward[v] = true;
        queue.push_back(v);
      }
    }
  }

  std::map<std::string, int> service_count;
  for (const auto& v : vulns) ++service_count[v.service + "@" + v.host];
  auto state_id = [&](std::size_t i) {
    std::string id = vulns[i].service + "@" + vulns[i].host;
    if (service_count[id] > 1) id += "#" + vulns[i].cve_id;
    return id;
  };

  if (!forward[goal]) {
    std::vector<std::string> frontier;
    for (std::size_t i = 0; i < n; ++i) {
      if (forward[i]) frontier.push_back(state_id(i));
    }
    std::string msg = "goal host " + topo.goal_host + " is unreachable from the entry; reachable:";
    for (const auto& id : frontier) msg += " " + id;
    throw UnreachableGoalError(msg, std::move(frontier));
  }

  std::vector<std::vector<std::size_t>> in(n + 2);
  for (std::size_t u = 0; u < n + 2; ++u) {
    for (auto v : out[u]) in[v].push_back(u);
  }
  std::vector<bool> backward(n + 2, false);
  backward[goal] = true;
  queue.assign({goal});
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto u : in[v]) {
      if (!backward[u]) {
        backward[u] = true;
        queue.push_back(u);
      }
    }
  }

  std::vector<std::size_t> remap(n + 2, SIZE_MAX);
  std::vector<State> states;
  remap[start] = states.size();
  states.push_back({"start", StateKind::Start, std::nullopt, std::nullopt});
  for (std::size_t i = 0; i < n; ++i) {
    if (forward[i] && backward[i]) {
      remap[i] = states.size();
      states.push_back({state_id(i), StateKind::Transient, i, std::nullopt});
    }
  }
  remap[goal] = states.size();
  states.push_back({"goal", StateKind::Goal, std::nullopt, std::nullopt});

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n + 2; ++u) {
    if (remap[u] == SIZE_MAX) continue;
    for (auto v : out[u]) {
      if (remap[v] != SIZE_MAX) edges.push_back({remap[u], remap[v]});
    }
  }
  AttackGraph g(vulns, std::move(states), std::move(edges));
  g.name = "built from topology";
  return g;
}

}  // namespace secmarkov
