#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tandem/rational.hpp"

namespace tandem {

/// The normalized numeric value every equality and voting decision runs on.
using CanonicalAnswer = Rational;

/// One problem instance. `reference_answer` is the ground truth when known.
struct Question {
  std::string id;
  std::string text;
  std::optional<CanonicalAnswer> reference_answer;
};

enum class ExtractionMethod { Marker, LastNumber };

/// Result of pulling a numeric answer out of free-form model text.
/// `answer` is absent exactly when the text holds no numeric token; the span
/// is the token's half-open character range in the input ([0,0) when absent).
struct ExtractionResult {
  std::optional<CanonicalAnswer> answer;
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  ExtractionMethod method = ExtractionMethod::LastNumber;
};

struct MalformedNumber : std::runtime_error {
  explicit MalformedNumber(const std::string& token)
      : std::runtime_error("malformed number: " + token) {}
};

/// Pulls the answer out of model output. If the GSM8K `####` marker occurs,
/// the first numeric token after the last marker wins and the method is
/// Marker even when no token follows; otherwise the last numeric token in
/// the text wins. Tokens may carry a leading sign, a leading `$`, 3-digit
/// comma groups and a decimal point.
ExtractionResult extract_answer(std::string_view text);

/// Exact rational equality; both sides are already in lowest terms.
bool answers_equal(const CanonicalAnswer& a, const CanonicalAnswer& b);

/// Parses one numeric token: optional sign, digits with optional comma
/// groups, optional fractional part; additionally accepts the "p/q" integer
/// fraction form that render() emits for non-terminating decimals.
/// Throws MalformedNumber on anything else.
CanonicalAnswer parse_number(std::string_view token);

/// Canonical text form (see Rational::to_string). parse_number(render(a)) == a.
std::string render(const CanonicalAnswer& a);

}  // namespace tandem
