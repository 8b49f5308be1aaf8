#pragma once

#include <string>
#include <vector>

#include "secmarkov/error.hpp"
#include "secmarkov/graph.hpp"

namespace secmarkov {

struct ServiceRef {
  std::string host;
  std::string service;
};

/// `from_host` can open connections to `to`.
struct Connectivity {
  std::string from_host;
  ServiceRef to;
};

struct Topology {
  std::vector<std::string> hosts;
  std::vector<Connectivity> reachability;
  std::vector<Vulnerability> vulnerabilities;
  ServiceRef entry;  // the service exposed to the attacker
  std::string goal_host;
};

/// Vulnerabilities on the goal host whose impact reaches this value are taken
/// to yield root there.
inline constexpr double kRootImpact = 10.0;

class UnreachableGoalError : public InputError {
 public:
  UnreachableGoalError(const std::string& what, std::vector<std::string> frontier)
      : InputError(what), frontier_(std::move(frontier)) {}
  const std::vector<std::string>& frontier() const { return frontier_; }

 private:
  std::vector<std::string> frontier_;
};

/// Forward construction under monotonic privileges: the attacker starts with
/// network access to `entry`; compromising any state on host H grants local
/// access on H and H's outbound connectivity. Locally exploitable
/// vulnerabilities (AV:L) need a foothold on their own host. States on the
/// goal host that yield root lead to the single goal state. States that are
/// unreachable from the start or cannot reach the goal are pruned.
AttackGraph build_from_topology(const Topology& topo);

}  // namespace secmarkov
