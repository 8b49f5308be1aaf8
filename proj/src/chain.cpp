#include "secmarkov/chain.hpp"

#include <cmath>
#include <sstream>

#include "secmarkov/error.hpp"

namespace secmarkov {

CanonicalChain::CanonicalChain(Matrix p, std::vector<std::string> ids, std::size_t start,
                               std::vector<bool> absorbing)
    : p_(std::move(p)), ids_(std::move(ids)), start_(start), position_(absorbing.size(), -1) {
  for (std::size_t i = 0; i < absorbing.size(); ++i) {
    auto& bucket = absorbing[i] ? absorbing_ : transient_;
    position_[i] = static_cast<std::ptrdiff_t>(bucket.size());
    bucket.push_back(i);
  }
  const auto nt = static_cast<Eigen::Index>(transient_.size());
  const auto na = static_cast<Eigen::Index>(absorbing_.size());
  q_.resize(nt, nt);
  r_.resize(nt, na);
  for (Eigen::Index a = 0; a < nt; ++a) {
    const auto row = static_cast<Eigen::Index>(transient_[a]);
    for (Eigen::Index b = 0; b < nt; ++b) q_(a, b) = p_(row, static_cast<Eigen::Index>(transient_[b]));
    for (Eigen::Index b = 0; b < na; ++b) r_(a, b) = p_(row, static_cast<Eigen::Index>(absorbing_[b]));
  }
}

CanonicalChain CanonicalChain::from_matrix(Matrix p, std::vector<std::string> state_ids,
                                           std::size_t start) {
  const auto n = p.rows();
  if (p.cols() != n || n == 0) throw InputError("transition matrix must be square and nonempty");
  if (state_ids.size() != static_cast<std::size_t>(n)) {
    throw InputError("state id count does not match transition matrix size");
  }
  if (start >= static_cast<std::size_t>(n)) throw InputError("start index out of range");

  std::vector<bool> absorbing(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = p(i, j);
      if (!(x >= 0.0 && x <= 1.0)) {
        throw InputError("transition probability out of [0, 1] in row " + state_ids[i]);
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw InputError("row " + state_ids[i] + " of the transition matrix does not sum to 1");
    }
    absorbing[i] = p(i, i) == 1.0;
  }
  if (absorbing[start]) throw InputError("start state must be transient");
  return CanonicalChain(std::move(p), std::move(state_ids), start, std::move(absorbing));
}

bool CanonicalChain::is_absorbing(std::size_t state) const {
  return absorbing_position(state).has_value();
}

std::optional<std::size_t> CanonicalChain::transient_position(std::size_t state) const {
  if (state >= position_.size()) return std::nullopt;
  const auto pos = static_cast<std::size_t>(position_[state]);
  if (pos < transient_.size() && transient_[pos] == state) return pos;
  return std::nullopt;
}

std::optional<std::size_t> CanonicalChain::absorbing_position(std::size_t state) const {
  if (state >= position_.size()) return std::nullopt;
  const auto pos = static_cast<std::size_t>(position_[state]);
  if (pos < absorbing_.size() && absorbing_[pos] == state) return pos;
  return std::nullopt;
}

CanonicalChain transition_matrix(const AttackGraph& g,
                                 std::span<const std::optional<double>> state_scores) {
  const std::size_t n = g.size();
  if (state_scores.size() != n) throw InputError("one score slot per graph state is required");
  const auto start = g.start();
  if (!start) throw InputError("attack graph has no start state");

  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<bool> absorbing(n, false);
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& s : g.states()) ids.push_back(s.id);

  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (g.state(i).kind == StateKind::Goal) {
      p(row, row) = 1.0;
      absorbing[i] = true;
      continue;
    }
    const auto succ = g.successors(i);
    if (succ.empty()) {
      throw NumericError("state '" + ids[i] + "' has no outgoing transitions");
    }
    if (succ.size() == 1) {
      p(row, static_cast<Eigen::Index>(succ[0])) = 1.0;
      continue;
    }

    std::vector<double> scores;
    scores.reserve(succ.size());
    double total = 0.0;
    for (auto j : succ) {
      std::optional<double> s = state_scores[j];
      if (!s && g.state(j).kind == StateKind::Goal) s = state_scores[i];
      if (!s) {
        throw InputError("no exploitability score for edge '" + ids[i] + "' -> '" + ids[j] + "'");
      }
      if (!(*s >= 0.0) || !std::isfinite(*s)) {
        throw InputError("invalid score on edge '" + ids[i] + "' -> '" + ids[j] + "'");
      }
      scores.push_back(*s);
      total += *s;
    }
    if (!(total > 0.0)) {
      throw NumericError("outgoing scores of state '" + ids[i] +
                         "' sum to zero; no exploitable transition");
    }

    std::size_t last = 0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
      if (scores[k] > 0.0) last = k;
    }
    double assigned = 0.0;
    for (std::size_t k = 0; k < succ.size(); ++k) {
      if (k == last) continue;
      const double x = scores[k] / total;
      p(row, static_cast<Eigen::Index>(succ[k])) = x;
      assigned += x;
    }
    p(row, static_cast<Eigen::Index>(succ[last])) = std::max(0.0, 1.0 - assigned);
  }
  return CanonicalChain::from_matrix(std::move(p), std::move(ids), *start);
}

FundamentalMatrix fundamental_matrix(const CanonicalChain& c) {
  const Matrix& q = c.Q();
  const Matrix id = Matrix::Identity(q.rows(), q.cols());
  const Matrix a = id - q;

  const Eigen::PartialPivLU<Matrix> lu(a);
  FundamentalMatrix out;
  out.reciprocal_condition = lu.rcond();
  if (!(out.reciprocal_condition > FundamentalMatrix::kMinReciprocalCondition) ||
      !std::isfinite(lu.determinant()) || lu.determinant() == 0.0) {
    std::ostringstream msg;
    msg << "I - Q is singular or ill-conditioned (reciprocal condition estimate "
        << out.reciprocal_condition
        << "); some transient states cannot reach an absorbing state";
    throw NumericError(msg.str());
  }
  out.N = lu.solve(id);
  out.residual = (a * out.N - id).cwiseAbs().rowwise().sum().maxCoeff();
  if (!(out.residual < FundamentalMatrix::kResidualTolerance) || !out.N.allFinite()) {
    std::ostringstream msg;
    msg << "fundamental matrix residual " << out.residual << " exceeds tolerance (reciprocal "
        << "condition estimate " << out.reciprocal_condition << ")";
    throw NumericError(msg.str());
  }
  return out;
}

Vector expected_path_length(const FundamentalMatrix& n) { return n.N.rowwise().sum(); }

Vector expected_path_length(const CanonicalChain& c) {
  return expected_path_length(fundamental_matrix(c));
}

Matrix absorption_probabilities(const CanonicalChain& c, const FundamentalMatrix& n) {
  return n.N * c.R();
}

Matrix absorption_probabilities(const CanonicalChain& c) {
  return absorption_probabilities(c, fundamental_matrix(c));
}

Vector expected_visits(const CanonicalChain& c, const FundamentalMatrix& n, std::size_t from) {
  const auto pos = c.transient_position(from);
  if (!pos) {
    throw InputError("expected visits are defined from transient states only; '" +
                     (from < c.size() ? c.state_ids()[from] : std::to_string(from)) +
                     "' is not transient");
  }
  return n.N.row(static_cast<Eigen::Index>(*pos)).transpose();
}

Vector expected_visits(const CanonicalChain& c, std::size_t from) {
  return expected_visits(c, fundamental_matrix(c), from);
}

ChainMetrics chain_metrics(const CanonicalChain& c) {
  ChainMetrics m;
  m.fundamental = fundamental_matrix(c);
  m.steps = expected_path_length(m.fundamental);
  m.absorption = absorption_probabilities(c, m.fundamental);
  const auto start = static_cast<Eigen::Index>(*c.transient_position(c.start()));
  m.epl = m.steps(start);
  m.pp = m.absorption.row(start).transpose();
  m.visits = m.fundamental.N.row(start).transpose();
  return m;
}

}  // namespace secmarkov
