#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secmarkov/date.hpp"
#include "secmarkov/vulnerability.hpp"

namespace secmarkov {

enum class StateKind { Start, Transient, Goal };

std::string to_string(StateKind kind);

struct State {
  std::string id;
  StateKind kind = StateKind::Transient;
  /// Index into AttackGraph::vulnerabilities(). Required for transient
  /// states; optional on a goal, where it names the vulnerability that
  /// completes the goal.
  std::optional<std::size_t> vulnerability;
  /// Explicit reward for a goal state, overriding the derived impact.
  std::optional<double> reward;
};

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// States, directed edges and the vulnerabilities they are bound to. The
/// constructor checks index bounds and id uniqueness only; the model
/// invariants are checked by validate() so that invalid graphs can still be
/// inspected and reported on.
class AttackGraph {
 public:
  AttackGraph() = default;
  AttackGraph(std::vector<Vulnerability> vulnerabilities, std::vector<State> states,
              std::vector<Edge> edges);

  const std::vector<Vulnerability>& vulnerabilities() const { return vulnerabilities_; }
  const std::vector<State>& states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return states_.size(); }

  const State& state(std::size_t i) const { return states_.at(i); }
  /// Successors of state i in ascending state-index order.
  std::span<const std::size_t> successors(std::size_t i) const { return out_.at(i); }
  std::span<const std::size_t> predecessors(std::size_t i) const { return in_.at(i); }

  std::optional<std::size_t> find(std::string_view id) const;
  /// First Start state, if any.
  std::optional<std::size_t> start() const;
  std::vector<std::size_t> goals() const;
  const Vulnerability* vulnerability_of(std::size_t state) const;

  // Free-form metadata carried through load/save.
  std::string name;
  std::optional<Date> scan_date;

 private:
  std::vector<Vulnerability> vulnerabilities_;
  std::vector<State> states_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

struct Violation {
  enum class Kind {
    StartCount,
    StartHasIncoming,
    NoGoal,
    GoalHasOutgoing,
    DeadEnd,
    GoalUnreachable,
    MissingVulnerability,
    BadVulnerability,
    DuplicateEdge,
  };

  Kind kind;
  std::string message;
  std::vector<std::string> states;
};

/// Every violated invariant, not just the first. Empty means the graph is a
/// valid absorbing attack graph.
std::vector<Violation> validate(const AttackGraph& g);

/// Parses a graph document without checking model invariants. Throws
/// InputError on schema problems or dangling references.
AttackGraph parse_graph(std::string_view json_text);
AttackGraph read_graph(const std::filesystem::path& path);

/// parse/read followed by validate(). Throws ValidationError listing every
/// violation.
AttackGraph load_graph_text(std::string_view json_text);
AttackGraph load_graph(const std::filesystem::path& path);

std::string save_graph(const AttackGraph& g);

}  // namespace secmarkov
