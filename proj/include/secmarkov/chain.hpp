#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "secmarkov/graph.hpp"

namespace secmarkov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Row-stochastic transition matrix over all states, in graph state order,
/// with the transient (Q) and transient-to-absorbing (R) blocks extracted.
class CanonicalChain {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Builds from an explicit matrix. Rows that are unit rows on the diagonal
  /// are the absorbing states. Throws InputError if P is not square, has
  /// entries outside [0, 1], or rows that do not sum to 1.
  static CanonicalChain from_matrix(Matrix p, std::vector<std::string> state_ids,
                                    std::size_t start);

  const Matrix& P() const { return p_; }
  const Matrix& Q() const { return q_; }
  const Matrix& R() const { return r_; }

  std::size_t size() const { return static_cast<std::size_t>(p_.rows()); }
  std::size_t start() const { return start_; }
  const std::vector<std::string>& state_ids() const { return ids_; }

  /// Graph state indices in Q/R row order, and in R column order.
  const std::vector<std::size_t>& transient_states() const { return transient_; }
  const std::vector<std::size_t>& absorbing_states() const { return absorbing_; }

  bool is_absorbing(std::size_t state) const;
  /// Position of a state within Q (or within R's columns if absorbing).
  std::optional<std::size_t> transient_position(std::size_t state) const;
  std::optional<std::size_t> absorbing_position(std::size_t state) const;

 private:
  CanonicalChain(Matrix p, std::vector<std::string> ids, std::size_t start,
                 std::vector<bool> absorbing);

  Matrix p_;
  Matrix q_;
  Matrix r_;
  std::vector<std::string> ids_;
  std::size_t start_ = 0;
  std::vector<std::size_t> transient_;
  std::vector<std::size_t> absorbing_;
  std::vector<std::ptrdiff_t> position_;
};

/// Normalizes per-edge scores over each state's outgoing edges:
///   p(i, j) = s(i, j) / sum_l s(i, l)
/// An edge into a state with a score takes that score; an edge into a goal
/// without its own vulnerability takes the score of the source state. A state
/// with a single outgoing edge gets probability 1 whatever the score. The last
/// positive entry of each row is closed to the exact remainder.
///
/// `state_scores` is indexed by graph state. Throws NumericError when a
/// state's outgoing scores sum to zero, InputError when a needed score is
/// missing.
CanonicalChain transition_matrix(const AttackGraph& g,
                                 std::span<const std::optional<double>> state_scores);

struct FundamentalMatrix {
  static constexpr double kResidualTolerance = 1e-9;
  static constexpr double kMinReciprocalCondition = 1e-13;

  Matrix N;
  double residual = 0.0;              // ||(I - Q) N - I||_inf
  double reciprocal_condition = 0.0;  // LU estimate for I - Q
};

/// N = (I - Q)^-1 by LU solve. Throws NumericError when I - Q is singular or
/// the residual check fails.
FundamentalMatrix fundamental_matrix(const CanonicalChain& c);

/// t = N 1, indexed like Q.
Vector expected_path_length(const CanonicalChain& c);
Vector expected_path_length(const FundamentalMatrix& n);

/// B = N R, rows like Q, columns like R.
Matrix absorption_probabilities(const CanonicalChain& c);
Matrix absorption_probabilities(const CanonicalChain& c, const FundamentalMatrix& n);

/// Row `from` of N, indexed like Q. Throws InputError if `from` is absorbing.
Vector expected_visits(const CanonicalChain& c, std::size_t from);
Vector expected_visits(const CanonicalChain& c, const FundamentalMatrix& n, std::size_t from);

/// The headline metrics at the start state, from a single factorization.
struct ChainMetrics {
  FundamentalMatrix fundamental;
  Vector steps;          // t
  Matrix absorption;     // B
  double epl = 0.0;      // t at start
  Vector pp;             // B row of start, one entry per absorbing state
  Vector visits;         // N row of start
};

ChainMetrics chain_metrics(const CanonicalChain& c);

}  // namespace secmarkov
