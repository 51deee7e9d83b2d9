#include "tandem/pair_engine.hpp"

#include "tandem/eqscript.hpp"

namespace tandem {
namespace {

bool has_slot(const std::string& tmpl, std::string_view slot) {
  return tmpl.find(slot) != std::string::npos;
}

void substitute(std::string& text, std::string_view slot,
                const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(slot, pos)) != std::string::npos) {
    text.replace(pos, slot.size(), value);
    pos += value.size();
  }
}

/// Runs the EQ side of one round: extract, parse, evaluate. Failures land in
/// `error`, never escape — a broken script is a mismatch, not a pair abort.
std::optional<CanonicalAnswer> solve_equations(const std::string& text,
                                               std::size_t step_limit,
                                               std::optional<std::string>& error) {
  try {
    std::string source = eqscript::extract_program(text);
    eqscript::EquationProgram program = eqscript::parse(source);
    return eqscript::evaluate(program, step_limit).answer;
  } catch (const eqscript::NoProgramFound& e) {
    error = e.what();
  } catch (const eqscript::SyntaxError& e) {
    error = e.what();
  } catch (const eqscript::EvalError& e) {
    error = e.what();
  }
  return std::nullopt;
}

}  // namespace

std::string_view hint_target_name(HintTarget target) {
  return target == HintTarget::GpOnly ? "gp_only" : "both";
}

HintTarget parse_hint_target(std::string_view text) {
  if (text == "gp_only") return HintTarget::GpOnly;
  if (text == "both") return HintTarget::Both;
  throw std::invalid_argument("unknown hint_target: " + std::string(text));
}

PromptTemplates default_templates() {
  PromptTemplates t;
  t.gp_base =
      "Solve the following grade-school math problem. Reason step by step "
      "and end with the final numeric answer.\n\n"
      "Question: {question}\n\nAnswer:";
  t.eq_base =
      "Translate the following math problem into plain arithmetic "
      "equations, one `name = expression` per line, assigning the final "
      "result to `answer`.\n\n"
      "Question: {question}\n\nEquations:";
  t.gp_hint =
      "Solve the following grade-school math problem. Reason step by step "
      "and end with the final numeric answer.\n\n"
      "Question: {question}\n\n"
      "A second solver disagreed with the previous attempt. The equations "
      "we used were:\n{equations}\n\n"
      "Reconsider the reasoning and end with the final numeric answer.\n\n"
      "Answer:";
  t.eq_hint =
      "Translate the following math problem into plain arithmetic "
      "equations, one `name = expression` per line, assigning the final "
      "result to `answer`.\n\n"
      "Question: {question}\n\n"
      "A second solver disagreed with the previous attempt. Logically "
      "thinking we might get the answer: {gp_answer}\n\n"
      "Reconsider the equations.\n\nEquations:";
  return t;
}

void PairConfig::validate() const {
  if (max_rounds < 1)
    throw std::invalid_argument("max_rounds must be at least 1");
  if (!has_slot(templates.gp_base, "{question}"))
    throw MissingPlaceholder("{question} in gp_base");
  if (!has_slot(templates.eq_base, "{question}"))
    throw MissingPlaceholder("{question} in eq_base");
  if (!has_slot(templates.gp_hint, "{question}"))
    throw MissingPlaceholder("{question} in gp_hint");
  if (!has_slot(templates.gp_hint, "{equations}"))
    throw MissingPlaceholder("{equations} in gp_hint");
  if (!has_slot(templates.eq_hint, "{question}"))
    throw MissingPlaceholder("{question} in eq_hint");
  if (!has_slot(templates.eq_hint, "{gp_answer}"))
    throw MissingPlaceholder("{gp_answer} in eq_hint");
}

std::string_view outcome_class_name(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::AgreedCorrect: return "agreed_correct";
    case OutcomeClass::AgreedWrong: return "agreed_wrong";
    case OutcomeClass::Disagreed: return "disagreed";
    case OutcomeClass::NoAnswer: return "no_answer";
  }
  return "no_answer";
}

OutcomeClass parse_outcome_class(std::string_view text) {
  if (text == "agreed_correct") return OutcomeClass::AgreedCorrect;
  if (text == "agreed_wrong") return OutcomeClass::AgreedWrong;
  if (text == "disagreed") return OutcomeClass::Disagreed;
  if (text == "no_answer") return OutcomeClass::NoAnswer;
  throw std::invalid_argument("unknown outcome class: " + std::string(text));
}

std::string build_prompt(const std::string& tmpl, const Question& question,
                         const RoundRecord* prior) {
  bool needs_equations = has_slot(tmpl, "{equations}");
  bool needs_gp_answer = has_slot(tmpl, "{gp_answer}");
  if ((needs_equations || needs_gp_answer) && prior == nullptr)
    throw MissingPrior();

  std::string out = tmpl;
  substitute(out, "{question}", question.text);
  if (needs_equations) {
    std::string equations;
    try {
      equations = eqscript::extract_program(prior->eq_text);
    } catch (const eqscript::NoProgramFound&) {
      equations = prior->eq_text;
    }
    substitute(out, "{equations}", equations);
  }
  if (needs_gp_answer) {
    substitute(out, "{gp_answer}",
               prior->gp_answer ? render(*prior->gp_answer) : prior->gp_text);
  }
  return out;
}

PairTranscript run_pair(const Question& question, Backend& gp_backend,
                        Backend& eq_backend, const PairConfig& config,
                        int pair_index) {
  config.validate();
  PairTranscript transcript;
  transcript.question_id = question.id;

  auto call = [&](Backend& backend, Role role, int round,
                  const std::string& prompt) {
    CompletionRequest request;
    request.prompt = prompt;
    request.max_tokens = config.max_tokens;
    request.temperature = config.temperature;
    request.stop = config.stop;
    CallContext context{&question, role, pair_index, round};
    return backend.complete(request, context).text;
  };

  for (int round = 0; round < config.max_rounds; ++round) {
    const RoundRecord* prior =
        round == 0 ? nullptr : &transcript.rounds.back();
    RoundRecord record;
    record.round = round;

    const std::string& gp_tmpl =
        round == 0 ? config.templates.gp_base : config.templates.gp_hint;
    record.gp_text =
        call(gp_backend, Role::GP, round, build_prompt(gp_tmpl, question, prior));
    record.gp_answer = extract_answer(record.gp_text).answer;

    bool reinfer_eq = round == 0 || config.hint_target == HintTarget::Both;
    if (reinfer_eq) {
      const std::string& eq_tmpl =
          round == 0 ? config.templates.eq_base : config.templates.eq_hint;
      record.eq_text = call(eq_backend, Role::EQ, round,
                            build_prompt(eq_tmpl, question, prior));
      record.eq_answer =
          solve_equations(record.eq_text, config.step_limit, record.eq_error);
    } else {
      record.eq_text = prior->eq_text;
      record.eq_answer = prior->eq_answer;
      record.eq_error = prior->eq_error;
    }

    record.matched = record.gp_answer && record.eq_answer &&
                     answers_equal(*record.gp_answer, *record.eq_answer);
    transcript.rounds.push_back(std::move(record));
    if (transcript.rounds.back().matched) {
      transcript.status = PairStatus::Agreed;
      break;
    }
  }

  const RoundRecord& last = transcript.rounds.back();
  transcript.final_gp_answer = last.gp_answer;
  transcript.final_eq_answer = last.eq_answer;
  return transcript;
}

OutcomeClass classify(const PairTranscript& transcript,
                      const CanonicalAnswer& reference) {
  if (!transcript.final_gp_answer || !transcript.final_eq_answer)
    return OutcomeClass::NoAnswer;
  if (transcript.status == PairStatus::Agreed) {
    return answers_equal(*transcript.final_gp_answer, reference)
               ? OutcomeClass::AgreedCorrect
               : OutcomeClass::AgreedWrong;
  }
  return OutcomeClass::Disagreed;
}

}  // namespace tandem
