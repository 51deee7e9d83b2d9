#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tandem/answer.hpp"

namespace tandem {

/// The two length-n final-answer vectors fed to the vote, one entry per
/// pair. Absent entries are pairs whose role produced no usable answer.
struct AnswerMatrix {
  std::vector<std::optional<CanonicalAnswer>> gp_answers;
  std::vector<std::optional<CanonicalAnswer>> eq_answers;
  std::vector<std::string> pair_ids;

  void validate() const;
};

/// Vote result. When fallback_used is false, winner_index holds the lowest
/// index attaining the maximum matching score and answer is that GP's
/// answer. When no score is positive, the answer is the plurality value
/// among present GP answers (EQ answers when no GP answer exists at all)
/// and winner_index is the lowest index holding it in that list.
struct Selection {
  std::size_t winner_index = 0;
  CanonicalAnswer answer;
  std::vector<int> scores;
  bool fallback_used = false;
};

struct NoAnswerAvailable : std::runtime_error {
  NoAnswerAvailable() : std::runtime_error("no answer in either matrix row") {}
};

/// 1 iff both present and equal; an absent value never matches anything.
int delta(const std::optional<CanonicalAnswer>& a,
          const std::optional<CanonicalAnswer>& b);

/// score_i = sum_j delta(gp_answers[i], eq_answers[j]); GP-indexed.
std::vector<int> matching_scores(const AnswerMatrix& matrix);

/// Picks the final answer; throws NoAnswerAvailable when all 2n entries are
/// absent.
Selection select(const AnswerMatrix& matrix);

}  // namespace tandem
