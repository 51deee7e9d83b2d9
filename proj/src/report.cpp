#include <cstdio>
#include <fstream>
#include <sstream>

#include "tandem/harness.hpp"

namespace tandem {
namespace {

nlohmann::json answer_to_json(const std::optional<CanonicalAnswer>& a) {
  if (!a) return nullptr;
  return render(*a);
}

std::optional<CanonicalAnswer> answer_from_json(const nlohmann::json& doc) {
  if (doc.is_null()) return std::nullopt;
  return parse_number(doc.get<std::string>());
}

nlohmann::json transcript_to_json(const PairTranscript& t) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const RoundRecord& r : t.rounds) {
    rounds.push_back({
        {"eq_answer", answer_to_json(r.eq_answer)},
        {"eq_error", r.eq_error ? nlohmann::json(*r.eq_error) : nullptr},
        {"eq_text", r.eq_text},
        {"gp_answer", answer_to_json(r.gp_answer)},
        {"gp_text", r.gp_text},
        {"matched", r.matched},
        {"round", r.round},
    });
  }
  nlohmann::json out = {
      {"final_eq_answer", answer_to_json(t.final_eq_answer)},
      {"final_gp_answer", answer_to_json(t.final_gp_answer)},
      {"question_id", t.question_id},
      {"rounds", std::move(rounds)},
      {"status", t.status == PairStatus::Agreed ? "agreed" : "exhausted"},
  };
  if (t.backend_error) out["backend_error"] = *t.backend_error;
  return out;
}

PairTranscript transcript_from_json(const nlohmann::json& doc) {
  PairTranscript t;
  t.question_id = doc.at("question_id").get<std::string>();
  t.status = doc.at("status").get<std::string>() == "agreed"
                 ? PairStatus::Agreed
                 : PairStatus::Exhausted;
  t.final_gp_answer = answer_from_json(doc.at("final_gp_answer"));
  t.final_eq_answer = answer_from_json(doc.at("final_eq_answer"));
  if (doc.contains("backend_error"))
    t.backend_error = doc.at("backend_error").get<std::string>();
  for (const nlohmann::json& r : doc.at("rounds")) {
    RoundRecord record;
    record.round = r.at("round").get<int>();
    record.gp_text = r.at("gp_text").get<std::string>();
    record.eq_text = r.at("eq_text").get<std::string>();
    record.gp_answer = answer_from_json(r.at("gp_answer"));
    record.eq_answer = answer_from_json(r.at("eq_answer"));
    if (!r.at("eq_error").is_null())
      record.eq_error = r.at("eq_error").get<std::string>();
    record.matched = r.at("matched").get<bool>();
    t.rounds.push_back(std::move(record));
  }
  return t;
}

nlohmann::json rate_or_null(std::uint64_t count, std::uint64_t total) {
  if (total == 0) return nullptr;
  return static_cast<double>(count) / static_cast<double>(total);
}

nlohmann::json rates_array(const std::vector<std::uint64_t>& counts,
                           std::uint64_t total) {
  nlohmann::json out = nlohmann::json::array();
  for (std::uint64_t c : counts) out.push_back(rate_or_null(c, total));
  return out;
}

std::string format_percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", rate * 100.0);
  return buf;
}

std::string roman_numeral(int value) {
  static const std::pair<int, const char*> kParts[] = {
      {1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"}, {100, "C"},
      {90, "XC"},  {50, "L"},   {40, "XL"}, {10, "X"},   {9, "IX"},
      {5, "V"},    {4, "IV"},   {1, "I"}};
  std::string out;
  for (auto [base, digits] : kParts) {
    while (value >= base) {
      out += digits;
      value -= base;
    }
  }
  return out;
}

void append_cell(std::string& line, const std::string& cell, std::size_t width) {
  if (cell.size() < width) line.append(width - cell.size(), ' ');
  line += cell;
}

std::string render_rate_row(const std::string& label,
                            const std::vector<std::uint64_t>& counts,
                            std::uint64_t total, std::size_t label_width,
                            std::size_t cell_width) {
  std::string line;
  line += label;
  if (label.size() < label_width) line.append(label_width - label.size(), ' ');
  for (std::uint64_t c : counts) {
    std::string cell = total == 0
                           ? "n/a"
                           : format_percent(static_cast<double>(c) /
                                            static_cast<double>(total));
    append_cell(line, cell, cell_width);
  }
  line += "\n";
  return line;
}

}  // namespace

nlohmann::json question_result_to_json(const QuestionResult& result) {
  nlohmann::json transcripts = nlohmann::json::array();
  for (const PairTranscript& t : result.transcripts)
    transcripts.push_back(transcript_to_json(t));
  nlohmann::json classes = nlohmann::json::array();
  for (OutcomeClass c : result.outcome_classes)
    classes.push_back(std::string(outcome_class_name(c)));

  nlohmann::json selection = nullptr;
  if (result.selection) {
    selection = {
        {"answer", render(result.selection->answer)},
        {"fallback_used", result.selection->fallback_used},
        {"scores", result.selection->scores},
        {"winner_index", result.selection->winner_index},
    };
  }
  return {
      {"outcome_classes", std::move(classes)},
      {"question_id", result.question_id},
      {"reference", render(result.reference)},
      {"selection", std::move(selection)},
      {"topology_correct", result.topology_correct},
      {"transcripts", std::move(transcripts)},
  };
}

QuestionResult question_result_from_json(const nlohmann::json& doc) {
  QuestionResult result;
  result.question_id = doc.at("question_id").get<std::string>();
  result.reference = parse_number(doc.at("reference").get<std::string>());
  for (const nlohmann::json& t : doc.at("transcripts"))
    result.transcripts.push_back(transcript_from_json(t));
  for (const nlohmann::json& c : doc.at("outcome_classes"))
    result.outcome_classes.push_back(parse_outcome_class(c.get<std::string>()));
  if (!doc.at("selection").is_null()) {
    const nlohmann::json& s = doc.at("selection");
    Selection selection;
    selection.winner_index = s.at("winner_index").get<std::size_t>();
    selection.answer = parse_number(s.at("answer").get<std::string>());
    selection.scores = s.at("scores").get<std::vector<int>>();
    selection.fallback_used = s.at("fallback_used").get<bool>();
    result.selection = std::move(selection);
  }
  result.topology_correct = doc.at("topology_correct").get<bool>();
  return result;
}

RunReport aggregate_results(const std::vector<QuestionResult>& results,
                            int n_pairs, const ReportConfigEcho& echo) {
  RunReport report;
  report.config = echo;
  report.questions = results.size();
  std::size_t n = static_cast<std::size_t>(n_pairs);
  report.gp_correct.assign(n, 0);
  report.eq_correct.assign(n, 0);
  report.agreed_correct.assign(n, 0);
  report.agreed_wrong.assign(n, 0);
  report.disagreed.assign(n, 0);
  report.no_answer.assign(n, 0);
  report.backend_failures.assign(n, 0);

  for (const QuestionResult& result : results) {
    if (result.transcripts.size() != n || result.outcome_classes.size() != n)
      throw RunError("result for question '" + result.question_id +
                     "' does not match n_pairs");
    for (std::size_t p = 0; p < n; ++p) {
      const PairTranscript& t = result.transcripts[p];
      if (t.final_gp_answer &&
          answers_equal(*t.final_gp_answer, result.reference))
        ++report.gp_correct[p];
      if (t.final_eq_answer &&
          answers_equal(*t.final_eq_answer, result.reference))
        ++report.eq_correct[p];
      if (t.backend_error) ++report.backend_failures[p];
      switch (result.outcome_classes[p]) {
        case OutcomeClass::AgreedCorrect: ++report.agreed_correct[p]; break;
        case OutcomeClass::AgreedWrong: ++report.agreed_wrong[p]; break;
        case OutcomeClass::Disagreed: ++report.disagreed[p]; break;
        case OutcomeClass::NoAnswer: ++report.no_answer[p]; break;
      }
    }
    if (result.topology_correct) ++report.topology_correct;
  }
  return report;
}

nlohmann::json report_to_json(const RunReport& report) {
  return {
      {"config",
       {
           {"dataset", report.config.dataset},
           {"hint_target", report.config.hint_target},
           {"max_rounds", report.config.max_rounds},
           {"n_pairs", report.config.n_pairs},
           {"seed", report.config.seed},
       }},
      {"counts",
       {
           {"agreed_correct", report.agreed_correct},
           {"agreed_wrong", report.agreed_wrong},
           {"backend_failures", report.backend_failures},
           {"disagreed", report.disagreed},
           {"eq_correct", report.eq_correct},
           {"gp_correct", report.gp_correct},
           {"no_answer", report.no_answer},
           {"questions", report.questions},
           {"topology_correct", report.topology_correct},
       }},
      {"rates",
       {
           {"agreed_correct_rate",
            rates_array(report.agreed_correct, report.questions)},
           {"agreed_wrong_rate",
            rates_array(report.agreed_wrong, report.questions)},
           {"disagreed_rate", rates_array(report.disagreed, report.questions)},
           {"eq_accuracy", rates_array(report.eq_correct, report.questions)},
           {"gp_accuracy", rates_array(report.gp_correct, report.questions)},
           {"no_answer_rate", rates_array(report.no_answer, report.questions)},
           {"topology_accuracy",
            rate_or_null(report.topology_correct, report.questions)},
       }},
  };
}

RunReport report_from_json(const nlohmann::json& doc) {
  RunReport report;
  const nlohmann::json& config = doc.at("config");
  report.config.dataset = config.at("dataset").get<std::string>();
  report.config.hint_target = config.at("hint_target").get<std::string>();
  report.config.max_rounds = config.at("max_rounds").get<int>();
  report.config.n_pairs = config.at("n_pairs").get<int>();
  report.config.seed = config.at("seed").get<std::uint64_t>();
  const nlohmann::json& counts = doc.at("counts");
  report.agreed_correct =
      counts.at("agreed_correct").get<std::vector<std::uint64_t>>();
  report.agreed_wrong =
      counts.at("agreed_wrong").get<std::vector<std::uint64_t>>();
  report.backend_failures =
      counts.at("backend_failures").get<std::vector<std::uint64_t>>();
  report.disagreed = counts.at("disagreed").get<std::vector<std::uint64_t>>();
  report.eq_correct = counts.at("eq_correct").get<std::vector<std::uint64_t>>();
  report.gp_correct = counts.at("gp_correct").get<std::vector<std::uint64_t>>();
  report.no_answer = counts.at("no_answer").get<std::vector<std::uint64_t>>();
  report.questions = counts.at("questions").get<std::uint64_t>();
  report.topology_correct = counts.at("topology_correct").get<std::uint64_t>();
  return report;
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw RunError("cannot open report output: " + path);
  out << report_to_json(report).dump(2) << "\n";
  if (!out) throw RunError("failed writing report to " + path);
}

RunReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RunError("cannot open report: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw RunError("report is not valid JSON: " + std::string(e.what()));
  }
  return report_from_json(doc);
}

std::vector<QuestionResult> load_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunError("cannot open results: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();

  std::vector<QuestionResult> results;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    bool final_unterminated = nl == std::string::npos;
    std::string line = final_unterminated ? content.substr(pos)
                                          : content.substr(pos, nl - pos);
    pos = final_unterminated ? content.size() : nl + 1;
    if (line.empty()) continue;
    try {
      results.push_back(question_result_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      // A ragged final line is the expected shape of an interrupted run.
      bool is_final = pos >= content.size();
      if (is_final) break;
      throw DatasetError(DatasetError::Kind::ParseError, 0,
                         "results file " + path +
                             ": malformed non-final line: " + e.what());
    }
  }
  return results;
}

std::string render_tables(const RunReport& report) {
  std::size_t n = report.gp_correct.size();
  const std::size_t cell = 10;
  std::size_t label_width = 12;

  std::string out;
  out += "Output for GPs\n";
  std::string header;
  header.append(label_width, ' ');
  for (std::size_t p = 0; p < n; ++p)
    append_cell(header, "GP " + roman_numeral(static_cast<int>(p) + 1), cell);
  out += header + "\n";
  out += render_rate_row("", report.gp_correct, report.questions, label_width,
                         cell);

  out += "\nOutput for EQs\n";
  header.clear();
  header.append(label_width, ' ');
  for (std::size_t p = 0; p < n; ++p)
    append_cell(header, "EQ " + roman_numeral(static_cast<int>(p) + 1), cell);
  out += header + "\n";
  out += render_rate_row("", report.eq_correct, report.questions, label_width,
                         cell);

  out += "\nRunning Network Independently\n";
  header.clear();
  header.append(label_width, ' ');
  for (std::size_t p = 0; p < n; ++p)
    append_cell(header, roman_numeral(static_cast<int>(p) + 1), cell);
  out += header + "\n";
  out += render_rate_row("GM=EQ!=Ans", report.agreed_wrong, report.questions,
                         label_width, cell);
  out += render_rate_row("GM=EQ=Ans", report.agreed_correct, report.questions,
                         label_width, cell);

  out += "\nTopology accuracy: ";
  if (report.questions == 0) {
    out += "n/a (0 questions)\n";
  } else {
    out += format_percent(static_cast<double>(report.topology_correct) /
                          static_cast<double>(report.questions));
    out += "% (" + std::to_string(report.topology_correct) + "/" +
           std::to_string(report.questions) + " questions)\n";
  }

  bool any_failure = false;
  for (std::uint64_t f : report.backend_failures) any_failure |= f > 0;
  if (any_failure) {
    out += "\nPair availability (questions with backend failures):\n";
    for (std::size_t p = 0; p < n; ++p) {
      out += "  pair " + roman_numeral(static_cast<int>(p) + 1) + ": " +
             std::to_string(report.backend_failures[p]) + "\n";
    }
  }
  return out;
}

}  // namespace tandem
