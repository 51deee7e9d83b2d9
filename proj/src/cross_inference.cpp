#include "tandem/cross_inference.hpp"

#include <algorithm>

namespace tandem {
namespace {

/// Most frequent present value; ties go to the value first seen. Returns the
/// index of the first holder, or nullopt when every entry is absent.
std::optional<std::size_t> plurality(
    const std::vector<std::optional<CanonicalAnswer>>& answers) {
  std::optional<std::size_t> best;
  int best_count = 0;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (!answers[i]) continue;
    // Only the first holder of a value can open a candidacy.
    bool first_holder = true;
    for (std::size_t j = 0; j < i; ++j)
      if (answers[j] && answers_equal(*answers[j], *answers[i])) {
        first_holder = false;
        break;
      }
    if (!first_holder) continue;
    int count = 0;
    for (const auto& a : answers)
      if (a && answers_equal(*a, *answers[i])) ++count;
    if (count > best_count) {
      best_count = count;
      best = i;
    }
  }
  return best;
}

}  // namespace

void AnswerMatrix::validate() const {
  if (gp_answers.empty()) throw std::invalid_argument("empty answer matrix");
  if (gp_answers.size() != eq_answers.size() ||
      (!pair_ids.empty() && pair_ids.size() != gp_answers.size()))
    throw std::invalid_argument("answer matrix rows differ in length");
}

int delta(const std::optional<CanonicalAnswer>& a,
          const std::optional<CanonicalAnswer>& b) {
  return a && b && answers_equal(*a, *b) ? 1 : 0;
}

std::vector<int> matching_scores(const AnswerMatrix& matrix) {
  matrix.validate();
  std::vector<int> scores(matrix.gp_answers.size(), 0);
  for (std::size_t i = 0; i < matrix.gp_answers.size(); ++i)
    for (const auto& eq : matrix.eq_answers)
      scores[i] += delta(matrix.gp_answers[i], eq);
  return scores;
}

Selection select(const AnswerMatrix& matrix) {
  Selection result;
  result.scores = matching_scores(matrix);

  int max_score = *std::max_element(result.scores.begin(), result.scores.end());
  if (max_score > 0) {
    std::size_t winner = 0;
    while (result.scores[winner] != max_score) ++winner;
    result.winner_index = winner;
    result.answer = *matrix.gp_answers[winner];
    return result;
  }

  result.fallback_used = true;
  if (auto gp = plurality(matrix.gp_answers)) {
    result.winner_index = *gp;
    result.answer = *matrix.gp_answers[*gp];
    return result;
  }
  if (auto eq = plurality(matrix.eq_answers)) {
    result.winner_index = *eq;
    result.answer = *matrix.eq_answers[*eq];
    return result;
  }
  throw NoAnswerAvailable();
}

}  // namespace tandem
