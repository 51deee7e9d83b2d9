#include "tandem/answer.hpp"

#include <cctype>

namespace tandem {
namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

/// Longest well-formed unsigned numeric token starting at `pos`:
/// digits, optional (",ddd")* groups and optional ".digits" tail. The lead
/// group is limited to 3 digits once commas are used. Returns the end
/// offset, or `pos` when nothing matches.
std::size_t match_unsigned(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i == pos) return pos;
  std::size_t end = i;
  if (i - pos <= 3) {
    while (i + 3 < text.size() && text[i] == ',' && is_digit(text[i + 1]) &&
           is_digit(text[i + 2]) && is_digit(text[i + 3]) &&
           (i + 4 >= text.size() || !is_digit(text[i + 4]))) {
      i += 4;
      end = i;
    }
  }
  if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
    ++i;
    while (i < text.size() && is_digit(text[i])) ++i;
    end = i;
  }
  return end;
}

struct Token {
  std::size_t begin;
  std::size_t end;
};

/// Scans for numeric tokens. A sign is taken as part of a token only when it
/// is not glued to a preceding digit, so "5-1" yields 5 and 1 while "=-8"
/// yields -8. A `$` may sit between the sign and the digits.
std::vector<Token> scan_tokens(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    std::size_t start = i;
    std::size_t digits_at = i;
    if ((c == '+' || c == '-') && (i == 0 || !is_digit(text[i - 1]))) {
      digits_at = i + 1;
      if (digits_at < text.size() && text[digits_at] == '$') ++digits_at;
    } else if (c == '$') {
      digits_at = i + 1;
    } else if (!is_digit(c)) {
      ++i;
      continue;
    }
    std::size_t end = match_unsigned(text, digits_at);
    if (end == digits_at) {
      ++i;
      continue;
    }
    tokens.push_back({start, end});
    i = end;
  }
  return tokens;
}

CanonicalAnswer parse_token_body(std::string_view token) {
  // Strip sign and currency, validate comma grouping, then hand the bare
  // decimal to Rational.
  std::string cleaned;
  cleaned.reserve(token.size());
  std::size_t pos = 0;
  if (pos < token.size() && (token[pos] == '+' || token[pos] == '-')) {
    cleaned.push_back(token[pos]);
    ++pos;
  }
  if (pos < token.size() && token[pos] == '$') ++pos;
  std::size_t digits_end = match_unsigned(token, pos);
  if (digits_end != token.size() || digits_end == pos)
    throw MalformedNumber(std::string(token));
  for (std::size_t i = pos; i < digits_end; ++i)
    if (token[i] != ',') cleaned.push_back(token[i]);
  return Rational::from_decimal_string(cleaned);
}

}  // namespace

ExtractionResult extract_answer(std::string_view text) {
  ExtractionResult result;
  std::size_t marker = text.rfind("####");
  std::vector<Token> tokens = scan_tokens(text);
  if (marker != std::string_view::npos) {
    result.method = ExtractionMethod::Marker;
    for (const Token& t : tokens) {
      if (t.begin >= marker + 4) {
        result.answer = parse_token_body(text.substr(t.begin, t.end - t.begin));
        result.span_begin = t.begin;
        result.span_end = t.end;
        break;
      }
    }
    return result;
  }
  result.method = ExtractionMethod::LastNumber;
  if (!tokens.empty()) {
    const Token& t = tokens.back();
    result.answer = parse_token_body(text.substr(t.begin, t.end - t.begin));
    result.span_begin = t.begin;
    result.span_end = t.end;
  }
  return result;
}

bool answers_equal(const CanonicalAnswer& a, const CanonicalAnswer& b) {
  return a == b;
}

CanonicalAnswer parse_number(std::string_view token) {
  std::size_t slash = token.find('/');
  if (slash != std::string_view::npos) {
    // Fraction form "p/q": plain signed integers, q > 0, no commas.
    try {
      BigInt num = BigInt::from_decimal(token.substr(0, slash));
      BigInt den = BigInt::from_decimal(token.substr(slash + 1));
      if (den.sign() <= 0) throw MalformedNumber(std::string(token));
      return Rational(std::move(num), std::move(den));
    } catch (const std::invalid_argument&) {
      throw MalformedNumber(std::string(token));
    }
  }
  return parse_token_body(token);
}

std::string render(const CanonicalAnswer& a) { return a.to_string(); }

}  // namespace tandem
