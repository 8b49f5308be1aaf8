#include <cmath>
#include <random>

#include "doctest.h"
#include "graph_builder.hpp"
#include "oracles.hpp"
#include "secmarkov/chain.hpp"
#include "secmarkov/error.hpp"

using namespace secmarkov;

namespace {

using Scores = std::vector<std::optional<double>>;

oracle::Dense dense(const Matrix& m) {
  oracle::Dense out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i].push_back(m(i, j));
  }
  return out;
}

CanonicalChain chain_of(std::initializer_list<std::initializer_list<double>> rows,
                        std::size_t start = 0) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix p(n, n);
  Eigen::Index i = 0;
  std::vector<std::string> ids;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) p(i, j++) = x;
    ids.push_back("s" + std::to_string(i));
    ++i;
  }
  return CanonicalChain::from_matrix(p, ids, start);
}

}  // namespace

TEST_CASE("scores normalize over the outgoing edges") {
  const auto g = builder::make({{"start", "a", "b", "g"},
                                {{"start", "a"}, {"start", "b"}, {"a", "g"}, {"b", "g"}}});
  const Scores s = {std::nullopt, 8.5, 8.6, std::nullopt};
  const auto c = transition_matrix(g, s);
  CHECK(c.P()(0, 1) == doctest::Approx(8.5 / 17.1).epsilon(1e-15));
  CHECK(c.P()(0, 2) == doctest::Approx(8.6 / 17.1).epsilon(1e-15));
  CHECK(std::abs(c.P()(0, 1) - 0.4971) < 1e-4);
  CHECK(std::abs(c.P()(0, 2) - 0.5029) < 1e-4);
  CHECK(c.P()(1, 3) == 1.0);
  CHECK(c.P()(3, 3) == 1.0);
  CHECK(c.P().row(0).sum() == 1.0);
}

TEST_CASE("equal scores split evenly and a single edge is certain") {
  const auto g = builder::make({{"start", "a", "b", "c", "g"},
                                {{"start", "a"}, {"start", "b"}, {"start", "c"},
                                 {"a", "g"}, {"b", "g"}, {"c", "g"}}});
  const Scores s = {std::nullopt, 4.2, 4.2, 4.2, std::nullopt};
  const auto c = transition_matrix(g, s);
  for (int j = 1; j <= 3; ++j) CHECK(c.P()(0, j) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const Scores tiny = {std::nullopt, 1e-6, 1e-6, 1e-6, std::nullopt};
  CHECK(transition_matrix(g, tiny).P()(1, 4) == 1.0);
}

TEST_CASE("zero and missing scores") {
  const auto g = builder::make({{"start", "a", "b", "g"},
                                {{"start", "a"}, {"start", "b"}, {"a", "g"}, {"b", "g"}}});
  CHECK_THROWS_AS(transition_matrix(g, Scores{std::nullopt, 0.0, 0.0, std::nullopt}),
                  NumericError);
  CHECK_THROWS_AS(transition_matrix(g, Scores{std::nullopt, std::nullopt, 2.0, std::nullopt}),
                  InputError);
  // One zero next to a positive score is an impossible edge, not an error.
  const auto c = transition_matrix(g, Scores{std::nullopt, 0.0, 2.0, std::nullopt});
  CHECK(c.P()(0, 1) == 0.0);
  CHECK(c.P()(0, 2) == 1.0);
}

TEST_CASE("fundamental matrix closed forms") {
  SUBCASE("self-loop") {
    const auto c = chain_of({{0.5, 0.5}, {0, 1}});
    const auto n = fundamental_matrix(c);
    CHECK(n.N.rows() == 1);
    CHECK(n.N(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(chain_metrics(c).epl == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("no transient-to-transient moves") {
    const auto c = chain_of({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
    CHECK(fundamental_matrix(c).N.isApprox(Matrix::Identity(2, 2), 1e-15));
  }
  SUBCASE("cascade") {
    const auto c = chain_of({{0, 0.5, 0.5}, {0, 0, 1}, {0, 0, 1}});
    Matrix expected(2, 2);
    expected << 1, 0.5, 0, 1;
    const auto n = fundamental_matrix(c);
    CHECK((n.N - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(n.residual < FundamentalMatrix::kResidualTolerance);
    CHECK(n.reciprocal_condition > FundamentalMatrix::kMinReciprocalCondition);
  }
}

TEST_CASE("forced chains") {
  const auto one = builder::make({{"start", "g"}, {{"start", "g"}}});
  CHECK(chain_metrics(transition_matrix(one, Scores{std::nullopt, std::nullopt})).epl == 1.0);
  const auto two = builder::make({{"start", "v", "g"}, {{"start", "v"}, {"v", "g"}}});
  const auto m = chain_metrics(transition_matrix(two, Scores{std::nullopt, 3.0, std::nullopt}));
  CHECK(m.epl == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.pp.size() == 1);
  CHECK(m.pp(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("absorption probabilities") {
  SUBCASE("a single goal absorbs everything") {
    const auto c = chain_of({{0, 0.3, 0.7, 0}, {0, 0.2, 0.3, 0.5}, {0.1, 0, 0, 0.9}, {0, 0, 0, 1}});
    const auto b = absorption_probabilities(c);
    for (Eigen::Index i = 0; i < b.rows(); ++i) CHECK(b(i, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("branch into two goals") {
    const auto c = chain_of({{0, 0.3, 0.7}, {0, 1, 0}, {0, 0, 1}});
    const auto m = chain_metrics(c);
    CHECK(m.pp(0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m.pp(1) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(m.epl == 1.0);
  }
  SUBCASE("fork and rejoin agrees with path enumeration") {
    const auto c = chain_of({{0, 0.4, 0.6, 0, 0, 0},
                             {0, 0, 0, 1, 0, 0},
                             {0, 0, 0, 0.5, 0.25, 0.25},
                             {0, 0, 0, 0, 0.9, 0.1},
                             {0, 0, 0, 0, 1, 0},
                             {0, 0, 0, 0, 0, 1}});
    const auto ref = oracle::enumerate_paths(dense(c.P()), 0);
    const auto m = chain_metrics(c);
    CHECK(std::abs(m.epl - ref.expected_length) < 1e-12);
    CHECK(std::abs(m.pp(0) - ref.absorbed.at(4)) < 1e-12);
    CHECK(std::abs(m.pp(1) - ref.absorbed.at(5)) < 1e-12);
    for (std::size_t k = 0; k < c.transient_states().size(); ++k) {
      CHECK(std::abs(m.visits(static_cast<Eigen::Index>(k)) -
                     ref.visits[c.transient_states()[k]]) < 1e-12);
    }
  }
}

TEST_CASE("random acyclic graphs agree with path enumeration") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const auto dag = oracle::random_dag(rng, 2 + trial % 7, 1 + trial % 3);
    const auto c = transition_matrix(dag.graph, dag.scores);
    const auto ref = oracle::enumerate_paths(dense(c.P()), c.start());
    const auto m = chain_metrics(c);
    CAPTURE(trial);
    CHECK(std::abs(m.epl - ref.expected_length) < 1e-9);
    for (std::size_t k = 0; k < c.absorbing_states().size(); ++k) {
      const auto s = c.absorbing_states()[k];
      const double expected = ref.absorbed.count(s) ? ref.absorbed.at(s) : 0.0;
      CHECK(std::abs(m.pp(static_cast<Eigen::Index>(k)) - expected) < 1e-9);
    }
    CHECK(std::abs(m.pp.sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("rows are stochastic and invariant to score scaling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dag = oracle::random_dag(rng, 1 + trial % 8, 1 + trial % 2);
    const auto c = transition_matrix(dag.graph, dag.scores);
    for (Eigen::Index i = 0; i < c.P().rows(); ++i) {
      CHECK(std::abs(c.P().row(i).sum() - 1.0) <= 1e-12);
      CHECK(c.P().row(i).minCoeff() >= 0.0);
      CHECK(c.P().row(i).maxCoeff() <= 1.0);
    }
    for (double factor : {0.1, 3.7, 1e-3, 250.0}) {
      auto scaled = dag.scores;
      for (auto& s : scaled) {
        if (s) *s *= factor;
      }
      const auto d = transition_matrix(dag.graph, scaled);
      CHECK((d.P() - c.P()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("error cases") {
  const auto c = chain_of({{0, 1}, {0, 1}});
  CHECK_THROWS_AS(expected_visits(c, 1), InputError);
  CHECK_NOTHROW(expected_visits(c, 0));
  // A closed transient class makes I - Q singular.
  CHECK_THROWS_AS(fundamental_matrix(chain_of({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})), NumericError);

  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(CanonicalChain::from_matrix(rect, {"a", "b"}, 0), InputError);
  CHECK_THROWS_AS(chain_of({{0.5, 0.4}, {0, 1}}), InputError);
  CHECK_THROWS_AS(chain_of({{1.5, -0.5}, {0, 1}}), InputError);
  CHECK_THROWS_AS(chain_of({{0, 1}, {0, 1}}, 1), InputError);
}

TEST_CASE("canonical partition") {
  const auto c = chain_of({{0, 0.3, 0, 0.7}, {0, 0, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(c.transient_states() == std::vector<std::size_t>{0, 1});
  CHECK(c.absorbing_states() == std::vector<std::size_t>{2, 3});
  CHECK(c.Q().rows() == 2);
  CHECK(c.R().cols() == 2);
  CHECK(c.R()(1, 0) == 1.0);
  CHECK(c.R()(0, 1) == 0.7);
  CHECK(*c.absorbing_position(3) == 1);
  CHECK_FALSE(c.transient_position(3));
  CHECK(c.is_absorbing(2));
}
