#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "tandem/harness.hpp"

namespace tandem {

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw DatasetError(DatasetError::Kind::ParseError, 0,
                       "cannot open dataset: " + path);
  Dataset dataset;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(DatasetError::Kind::ParseError, line_no,
                         "dataset line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
    }
    if (!doc.contains("question") || !doc.contains("answer"))
      throw DatasetError(DatasetError::Kind::ParseError, line_no,
                         "dataset line " + std::to_string(line_no) +
                             ": expected fields question/answer");

    Question question;
    question.id = doc.value("id", "q" + std::to_string(line_no));
    question.text = doc.at("question").get<std::string>();
    if (question.text.empty())
      throw DatasetError(DatasetError::Kind::ParseError, line_no,
                         "dataset line " + std::to_string(line_no) +
                             ": empty question text");

    ExtractionResult extracted =
        extract_answer(doc.at("answer").get<std::string>());
    if (extracted.method != ExtractionMethod::Marker || !extracted.answer)
      throw DatasetError(DatasetError::Kind::MissingMarker, line_no,
                         "dataset line " + std::to_string(line_no) +
                             ": answer field has no `#### <number>` marker");
    question.reference_answer = extracted.answer;

    if (!seen_ids.insert(question.id).second)
      throw DatasetError(DatasetError::Kind::DuplicateId, line_no,
                         "dataset line " + std::to_string(line_no) +
                             ": duplicate question id '" + question.id + "'");
    dataset.questions.push_back(std::move(question));
  }
  return dataset;
}

}  // namespace tandem
