#include <doctest.h>

#include <atomic>

#include "fixtures.hpp"
#include "tandem/pair_engine.hpp"

using namespace tandem;

namespace {

/// Wraps a backend, recording prompts and counting calls.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(std::shared_ptr<Backend> inner)
      : inner_(std::move(inner)) {}

  CompletionResponse complete(const CompletionRequest& request,
                              const CallContext& context) override {
    {
      std::lock_guard lock(mutex_);
      prompts_.push_back(request.prompt);
    }
    ++calls_;
    return inner_->complete(request, context);
  }
  std::string id() const override { return inner_->id(); }

  int calls() const { return calls_.load(); }
  std::vector<std::string> prompts() const {
    std::lock_guard lock(mutex_);
    return prompts_;
  }

 private:
  std::shared_ptr<Backend> inner_;
  std::atomic<int> calls_{0};
  mutable std::mutex mutex_;
  std::vector<std::string> prompts_;
};

Question candle_question() {
  Question q;
  q.id = "candle";
  q.text = "A candle melts by 2 centimetres every hour...";
  q.reference_answer = CanonicalAnswer(8);
  return q;
}

Question downloads_question() {
  Question q;
  q.id = "downloads";
  q.text = "A new program had 60 downloads in the first month...";
  q.reference_answer = CanonicalAnswer(366);
  return q;
}

}  // namespace

TEST_CASE("build_prompt substitutes the question") {
  Question q{"q", "Q?", std::nullopt};
  CHECK(build_prompt("Solve: {question}", q, nullptr) == "Solve: Q?");
}

TEST_CASE("build_prompt embeds the prior round's artifacts") {
  Question q{"q", "Q?", std::nullopt};
  RoundRecord prior;
  prior.eq_text = "Sure:\n```\nh = 5 - 1\nanswer = h * 2\n```";
  prior.gp_answer = CanonicalAnswer(6);
  prior.gp_text = "prose ending in 6";

  std::string gp_hint = build_prompt(
      "The equations we used were:\n{equations}\nFor {question}", q, &prior);
  CHECK(gp_hint.find("h = 5 - 1\nanswer = h * 2") != std::string::npos);

  std::string eq_hint = build_prompt(
      "Logically thinking we might get the answer: {gp_answer}", q, &prior);
  CHECK(eq_hint == "Logically thinking we might get the answer: 6");

  SUBCASE("raw eq text when no program extracts") {
    prior.eq_text = "I could not write equations.";
    std::string raw = build_prompt("{equations}", q, &prior);
    CHECK(raw == "I could not write equations.");
  }
  SUBCASE("raw gp text when no answer extracted") {
    prior.gp_answer.reset();
    prior.gp_text = "no number at all";
    CHECK(build_prompt("{gp_answer}", q, &prior) == "no number at all");
  }
}

TEST_CASE("build_prompt requires a prior for hint slots") {
  Question q{"q", "Q?", std::nullopt};
  CHECK_THROWS_AS(build_prompt("{equations}", q, nullptr), MissingPrior);
  CHECK_THROWS_AS(build_prompt("{gp_answer}", q, nullptr), MissingPrior);
}

TEST_CASE("pair config validation catches missing placeholders") {
  PairConfig config;
  config.templates.gp_hint = "no slots at all";
  CHECK_THROWS_AS(config.validate(), MissingPlaceholder);
  PairConfig rounds;
  rounds.max_rounds = 0;
  CHECK_THROWS_AS(rounds.validate(), std::invalid_argument);
}

TEST_CASE("candle pair: disagree, hint, agree") {
  Question q = candle_question();
  auto gp = std::make_shared<ScriptedBackend>(fixtures::fixture_gp_entries(0));
  auto eq = std::make_shared<ScriptedBackend>(fixtures::fixture_eq_entries(0));
  RecordingBackend gp_rec(gp), eq_rec(eq);

  PairConfig config;  // gp_only, 2 rounds
  PairTranscript t = run_pair(q, gp_rec, eq_rec, config);

  REQUIRE(t.rounds.size() == 2);
  CHECK(t.status == PairStatus::Agreed);
  CHECK_FALSE(t.rounds[0].matched);
  CHECK(*t.rounds[0].gp_answer == CanonicalAnswer(6));
  CHECK(*t.rounds[0].eq_answer == CanonicalAnswer(8));
  CHECK(t.rounds[1].matched);
  CHECK(*t.final_gp_answer == CanonicalAnswer(8));
  CHECK(*t.final_eq_answer == CanonicalAnswer(8));

  // Budget: 2 + (max_rounds - 1) * 1 with gp_only.
  CHECK(gp_rec.calls() + eq_rec.calls() == 3);

  // Hint provenance: the round-1 GP prompt embeds the round-0 EQ program.
  auto prompts = gp_rec.prompts();
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[1].find(fixtures::kCandleEqScript) != std::string::npos);
  CHECK(prompts[0].find("The equations we used were") == std::string::npos);
}

TEST_CASE("immediate agreement issues no hint prompts") {
  Question q = candle_question();
  auto gp = std::make_shared<ScriptedBackend>(fixtures::fixture_gp_entries(1));
  auto eq = std::make_shared<ScriptedBackend>(fixtures::fixture_eq_entries(1));
  RecordingBackend gp_rec(gp), eq_rec(eq);

  PairTranscript t = run_pair(q, gp_rec, eq_rec, PairConfig{});
  CHECK(t.status == PairStatus::Agreed);
  CHECK(t.rounds.size() == 1);
  CHECK(gp_rec.calls() == 1);
  CHECK(eq_rec.calls() == 1);
}

TEST_CASE("exhausted pair keeps the last round's answers") {
  Question q = downloads_question();
  auto gp = std::make_shared<ScriptedBackend>(fixtures::fixture_gp_entries(0));
  auto eq = std::make_shared<ScriptedBackend>(fixtures::fixture_eq_entries(0));

  PairTranscript t = run_pair(q, *gp, *eq, PairConfig{});
  CHECK(t.status == PairStatus::Exhausted);
  REQUIRE(t.rounds.size() == 2);
  CHECK(*t.final_gp_answer == CanonicalAnswer(426));
  CHECK(*t.final_eq_answer == CanonicalAnswer(366));
  // Round monotonicity under gp_only: the EQ answer never changes.
  CHECK(*t.rounds[0].eq_answer == *t.rounds[1].eq_answer);
  CHECK(t.rounds[0].eq_text == t.rounds[1].eq_text);
}

TEST_CASE("hint_target both re-infers both roles") {
  Question q{"q3", "toy", CanonicalAnswer(1)};
  auto gp = std::make_shared<ScriptedBackend>(
      std::vector<ScriptedBackend::Entry>{{"q3", Role::GP, 0, "maybe 1"},
                                          {"q3", Role::GP, 1, "surely 1"}});
  auto eq = std::make_shared<ScriptedBackend>(
      std::vector<ScriptedBackend::Entry>{{"q3", Role::EQ, 0, "answer = 2"},
                                          {"q3", Role::EQ, 1, "answer = 1"}});
  RecordingBackend gp_rec(gp), eq_rec(eq);

  PairConfig config;
  config.hint_target = HintTarget::Both;
  PairTranscript t = run_pair(q, gp_rec, eq_rec, config);
  CHECK(t.status == PairStatus::Agreed);
  CHECK(*t.final_eq_answer == CanonicalAnswer(1));
  // Budget: 2 + (max_rounds - 1) * 2 with both.
  CHECK(gp_rec.calls() + eq_rec.calls() == 4);
  // The round-1 EQ prompt carries the round-0 GP answer.
  auto prompts = eq_rec.prompts();
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[1].find("Logically thinking we might get the answer: 1") !=
        std::string::npos);
}

TEST_CASE("solver failure is a mismatch, not a pair error") {
  Question q{"q4", "toy", CanonicalAnswer(3)};
  ScriptedBackend gp({{"q4", Role::GP, 0, "it is 3"},
                      {"q4", Role::GP, 1, "it is 3"}});
  ScriptedBackend eq({{"q4", Role::EQ, 0, "answer = 3 / 0"}});

  PairTranscript t = run_pair(q, gp, eq, PairConfig{});
  CHECK(t.status == PairStatus::Exhausted);
  CHECK_FALSE(t.rounds[0].eq_answer.has_value());
  REQUIRE(t.rounds[0].eq_error.has_value());
  CHECK(t.rounds[0].eq_error->find("division by zero") != std::string::npos);
  CHECK(*t.final_gp_answer == CanonicalAnswer(3));
  CHECK_FALSE(t.final_eq_answer.has_value());
}

TEST_CASE("scripted fidelity: extra rounds are hard errors") {
  Question q{"q5", "toy", CanonicalAnswer(1)};
  // Table only covers round 0, but the pair disagrees, forcing a round 1.
  ScriptedBackend gp({{"q5", Role::GP, 0, "says 2"}});
  ScriptedBackend eq({{"q5", Role::EQ, 0, "answer = 1"}});
  CHECK_THROWS_AS(run_pair(q, gp, eq, PairConfig{}), BackendError);
}

TEST_CASE("classify covers the Table 3 classes") {
  auto transcript = [](PairStatus status, std::optional<CanonicalAnswer> gp,
                       std::optional<CanonicalAnswer> eq) {
    PairTranscript t;
    t.status = status;
    t.final_gp_answer = std::move(gp);
    t.final_eq_answer = std::move(eq);
    return t;
  };
  CanonicalAnswer ref(8);
  CHECK(classify(transcript(PairStatus::Agreed, CanonicalAnswer(8),
                            CanonicalAnswer(8)),
                 ref) == OutcomeClass::AgreedCorrect);
  CHECK(classify(transcript(PairStatus::Agreed, CanonicalAnswer(7),
                            CanonicalAnswer(7)),
                 ref) == OutcomeClass::AgreedWrong);
  CHECK(classify(transcript(PairStatus::Exhausted, CanonicalAnswer(426),
                            CanonicalAnswer(366)),
                 CanonicalAnswer(366)) == OutcomeClass::Disagreed);
  CHECK(classify(transcript(PairStatus::Exhausted, CanonicalAnswer(426),
                            std::nullopt),
                 ref) == OutcomeClass::NoAnswer);
  CHECK(classify(transcript(PairStatus::Exhausted, std::nullopt, std::nullopt),
                 ref) == OutcomeClass::NoAnswer);
}
