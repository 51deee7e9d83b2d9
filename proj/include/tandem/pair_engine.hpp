#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tandem/answer.hpp"
#include "tandem/backend.hpp"

namespace tandem {

enum class HintTarget { GpOnly, Both };

std::string_view hint_target_name(HintTarget target);
HintTarget parse_hint_target(std::string_view text);

/// Prompt templates with placeholder slots {question}, {equations},
/// {gp_answer}. The hint templates carry the counterpart's prior-round
/// artifact.
struct PromptTemplates {
  std::string gp_base;
  std::string eq_base;
  std::string gp_hint;
  std::string eq_hint;
};

PromptTemplates default_templates();

struct PairConfig {
  int max_rounds = 2;
  HintTarget hint_target = HintTarget::GpOnly;
  PromptTemplates templates = default_templates();
  std::size_t step_limit = 10'000;
  int max_tokens = 512;
  double temperature = 0.7;
  std::vector<std::string> stop = {"\n\n"};

  /// Throws MissingPlaceholder / std::invalid_argument when a template lacks
  /// a required slot or max_rounds < 1.
  void validate() const;
};

struct MissingPrior : std::logic_error {
  MissingPrior() : std::logic_error("hint template needs a prior round") {}
};

struct MissingPlaceholder : std::invalid_argument {
  explicit MissingPlaceholder(const std::string& which)
      : std::invalid_argument("template is missing placeholder " + which) {}
};

/// One round of a pair: both raw texts, both extracted answers, and whether
/// they matched. `matched` implies both answers present and equal.
struct RoundRecord {
  int round = 0;
  std::string gp_text;
  std::string eq_text;
  std::optional<CanonicalAnswer> gp_answer;
  std::optional<CanonicalAnswer> eq_answer;
  std::optional<std::string> eq_error;
  bool matched = false;
};

enum class PairStatus { Agreed, Exhausted };

struct PairTranscript {
  std::string question_id;
  std::vector<RoundRecord> rounds;
  PairStatus status = PairStatus::Exhausted;
  std::optional<CanonicalAnswer> final_gp_answer;
  std::optional<CanonicalAnswer> final_eq_answer;
  /// Set when the harness abandoned this pair on a backend failure.
  std::optional<std::string> backend_error;
};

/// Table 3 outcome classes.
enum class OutcomeClass { AgreedCorrect, AgreedWrong, Disagreed, NoAnswer };

std::string_view outcome_class_name(OutcomeClass c);
OutcomeClass parse_outcome_class(std::string_view text);

/// Substitutes {question} from the question and, for hint templates, the
/// prior round's artifacts: {equations} gets the EQ program source extracted
/// from prior->eq_text (raw text when extraction fails), {gp_answer} gets
/// the prior GP answer (raw GP text when no answer was extracted). Throws
/// MissingPrior when a hint slot occurs with no prior.
std::string build_prompt(const std::string& tmpl, const Question& question,
                         const RoundRecord* prior);

/// Runs one GP/EQ pair: independent solve, compare, hint, re-infer. Round 0
/// uses the base prompts; on mismatch, later rounds re-prompt per
/// hint_target (GpOnly re-infers only GP and carries the EQ answer
/// forward). Stops early with Agreed on a match. Solver failures are
/// recorded per round, never raised; backend errors propagate.
PairTranscript run_pair(const Question& question, Backend& gp_backend,
                        Backend& eq_backend, const PairConfig& config,
                        int pair_index = 0);

/// Classifies a finished transcript against the ground truth.
OutcomeClass classify(const PairTranscript& transcript,
                      const CanonicalAnswer& reference);

}  // namespace tandem
