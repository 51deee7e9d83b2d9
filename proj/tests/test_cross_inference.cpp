#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "tandem/cross_inference.hpp"

using namespace tandem;

namespace {

std::optional<CanonicalAnswer> A(long long v) { return CanonicalAnswer(v); }
std::optional<CanonicalAnswer> none() { return std::nullopt; }

AnswerMatrix matrix(std::vector<std::optional<CanonicalAnswer>> gp,
                    std::vector<std::optional<CanonicalAnswer>> eq) {
  AnswerMatrix m;
  m.gp_answers = std::move(gp);
  m.eq_answers = std::move(eq);
  return m;
}

}  // namespace

TEST_CASE("delta requires presence and equality") {
  CHECK(delta(A(8), A(8)) == 1);
  CHECK(delta(A(6), A(8)) == 0);
  CHECK(delta(A(8), none()) == 0);
  CHECK(delta(none(), none()) == 0);
}

TEST_CASE("matching scores, hand-counted") {
  // Brute-force count of equal (i, j) cells:
  //   GP=[8,8,6,8] vs EQ=[8,6,8,8] -> 8 matches 3 EQ entries, 6 matches 1.
  auto m = matrix({A(8), A(8), A(6), A(8)}, {A(8), A(6), A(8), A(8)});
  CHECK(matching_scores(m) == std::vector<int>{3, 3, 1, 3});

  CHECK(matching_scores(matrix({A(5), A(5), A(5)}, {A(5), A(5), A(5)})) ==
        std::vector<int>{3, 3, 3});
  CHECK(matching_scores(matrix({A(1), A(2), A(3)}, {A(4), A(5), A(6)})) ==
        std::vector<int>{0, 0, 0});
}

TEST_CASE("select picks the lowest index at the maximum score") {
  Selection s = select(matrix({A(8), A(8), A(6), A(8)}, {A(8), A(6), A(8), A(8)}));
  CHECK(s.winner_index == 0);
  CHECK(s.answer == CanonicalAnswer(8));
  CHECK(s.scores == std::vector<int>{3, 3, 1, 3});
  CHECK_FALSE(s.fallback_used);
}

TEST_CASE("select with absences") {
  // 2x2 delta table: only (gp[1], eq[0]) matches.
  Selection s = select(matrix({none(), A(7)}, {A(7), none()}));
  CHECK(s.winner_index == 1);
  CHECK(s.answer == CanonicalAnswer(7));
  CHECK(s.scores == std::vector<int>{0, 1});
  CHECK_FALSE(s.fallback_used);
}

TEST_CASE("select fallback is the GP plurality") {
  SUBCASE("all-distinct tie goes to the lowest index") {
    Selection s = select(matrix({A(1), A(2), A(3)}, {A(4), A(5), A(6)}));
    CHECK(s.fallback_used);
    CHECK(s.winner_index == 0);
    CHECK(s.answer == CanonicalAnswer(1));
  }
  SUBCASE("true plurality wins over an earlier singleton") {
    Selection s = select(matrix({A(9), A(2), A(2)}, {A(4), A(5), A(6)}));
    CHECK(s.fallback_used);
    CHECK(s.winner_index == 1);
    CHECK(s.answer == CanonicalAnswer(2));
  }
  SUBCASE("EQ plurality when no GP answer exists") {
    Selection s = select(matrix({none(), none()}, {A(4), A(4)}));
    CHECK(s.fallback_used);
    CHECK(s.answer == CanonicalAnswer(4));
    CHECK(s.winner_index == 0);
  }
  SUBCASE("nothing at all") {
    CHECK_THROWS_AS(select(matrix({none(), none()}, {none(), none()})),
                    NoAnswerAvailable);
  }
}

TEST_CASE("unanimity gives every pair score n") {
  auto m = matrix({A(5), A(5), A(5), A(5)}, {A(5), A(5), A(5), A(5)});
  Selection s = select(m);
  CHECK(s.scores == std::vector<int>{4, 4, 4, 4});
  CHECK(s.answer == CanonicalAnswer(5));
}

TEST_CASE("matrix invariants") {
  AnswerMatrix bad;
  CHECK_THROWS_AS(matching_scores(bad), std::invalid_argument);
  bad.gp_answers = {A(1)};
  bad.eq_answers = {A(1), A(2)};
  CHECK_THROWS_AS(select(bad), std::invalid_argument);
}

TEST_CASE("select agrees with the exhaustive reference on random matrices") {
  Rng rng(555);
  for (int i = 0; i < 5000; ++i) {
    AnswerMatrix m = oracle::random_matrix(rng);
    oracle::RefSelection expected = oracle::reference_select(m);
    if (expected.none) {
      CHECK_THROWS_AS(select(m), NoAnswerAvailable);
      continue;
    }
    Selection got = select(m);
    CHECK(got.winner_index == expected.winner);
    CHECK(got.scores == expected.scores);
    CHECK(got.fallback_used == expected.fallback);
    CHECK(got.answer == *expected.answer);
  }
}

TEST_CASE("permutation covariance of scores") {
  Rng rng(556);
  for (int i = 0; i < 300; ++i) {
    AnswerMatrix m = oracle::random_matrix(rng);
    std::vector<int> scores = matching_scores(m);
    std::vector<std::size_t> perm(m.gp_answers.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = perm.size(); k > 1; --k)
      std::swap(perm[k - 1], perm[rng.next_below(k)]);

    AnswerMatrix permuted;
    permuted.gp_answers.resize(perm.size());
    permuted.eq_answers.resize(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      permuted.gp_answers[perm[k]] = m.gp_answers[k];
      permuted.eq_answers[perm[k]] = m.eq_answers[k];
    }
    std::vector<int> permuted_scores = matching_scores(permuted);
    for (std::size_t k = 0; k < perm.size(); ++k)
      CHECK(permuted_scores[perm[k]] == scores[k]);

    // Score bound.
    for (int s : scores) {
      CHECK(s >= 0);
      CHECK(s <= static_cast<int>(m.gp_answers.size()));
    }
  }
}
