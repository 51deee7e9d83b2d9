#include "tandem/eqscript.hpp"

#include <cctype>
#include <utility>

namespace tandem::eqscript {
namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

/// True for lines shaped `identifier = expression` (a single `=`, not `==`).
bool looks_like_assignment(std::string_view line) {
  std::string_view t = trim(line);
  if (t.empty() || !is_ident_start(t[0])) return false;
  std::size_t i = 1;
  while (i < t.size() && is_ident_char(t[i])) ++i;
  while (i < t.size() && (t[i] == ' ' || t[i] == '\t')) ++i;
  if (i >= t.size() || t[i] != '=') return false;
  ++i;
  if (i < t.size() && t[i] == '=') return false;
  return !trim(t.substr(i)).empty();
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Ident,
  Number,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  StarStar,
  LParen,
  RParen,
  Newline,
  End,
};

struct Token {
  Tok kind;
  int line;
  int column;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        out.push_back(make(Tok::Newline, "\n"));
        advance();
        ++line_;
        column_ = 1;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (is_digit(c)) {
        out.push_back(lex_number());
        continue;
      }
      if (is_ident_start(c)) {
        out.push_back(lex_ident());
        continue;
      }
      Token t = make(Tok::End, std::string(1, c));
      switch (c) {
        case '=': t.kind = Tok::Assign; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '/': t.kind = Tok::Slash; break;
        case '%': t.kind = Tok::Percent; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '*':
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
            t.kind = Tok::StarStar;
            t.text = "**";
            advance();
          } else {
            t.kind = Tok::Star;
          }
          break;
        default:
          throw SyntaxError(line_, column_, "a valid token, got '" +
                                                std::string(1, c) + "'");
      }
      advance();
      out.push_back(std::move(t));
    }
    out.push_back(make(Tok::End, ""));
    return out;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;

  void advance() {
    ++pos_;
    ++column_;
  }

  Token make(Tok kind, std::string text) const {
    return Token{kind, line_, column_, std::move(text)};
  }

  Token lex_number() {
    Token t = make(Tok::Number, "");
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

  Token lex_ident() {
    Token t = make(Tok::Ident, "");
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view source)
      : tokens_(Lexer(source).run()), source_(source) {}

  EquationProgram run() {
    EquationProgram program;
    program.source = std::string(source_);
    while (!at(Tok::End)) {
      if (at(Tok::Newline)) {
        next();
        continue;
      }
      program.statements.push_back(statement());
      if (!at(Tok::End)) expect(Tok::Newline, "end of statement");
    }
    if (program.statements.empty())
      throw SyntaxError(1, 1, "at least one assignment");
    return program;
  }

 private:
  std::vector<Token> tokens_;
  std::string_view source_;
  std::size_t pos_ = 0;

  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }

  Token next() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  Token expect(Tok kind, const std::string& what) {
    if (!at(kind))
      throw SyntaxError(peek().line, peek().column,
                        what + ", got '" + describe(peek()) + "'");
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "<end>";
    if (t.kind == Tok::Newline) return "<newline>";
    return t.text;
  }

  Assignment statement() {
    Token name = expect(Tok::Ident, "an identifier");
    expect(Tok::Assign, "'='");
    Assignment st;
    st.target = name.text;
    st.line = name.line;
    st.expr = expression();
    return st;
  }

  ExprPtr expression() { return add_sub(); }

  ExprPtr add_sub() {
    ExprPtr left = mul_div();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token op = next();
      ExprPtr right = mul_div();
      left = binary(op.kind == Tok::Plus ? BinOp::Add : BinOp::Sub, op,
                    std::move(left), std::move(right));
    }
    return left;
  }

  ExprPtr mul_div() {
    ExprPtr left = unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      Token op = next();
      BinOp kind = op.kind == Tok::Star    ? BinOp::Mul
                   : op.kind == Tok::Slash ? BinOp::Div
                                           : BinOp::Mod;
      ExprPtr right = unary();
      left = binary(kind, op, std::move(left), std::move(right));
    }
    return left;
  }

  ExprPtr unary() {
    if (at(Tok::Minus)) {
      Token op = next();
      auto node = std::make_unique<Expr>();
      node->kind = Expr::Kind::Neg;
      node->line = op.line;
      node->column = op.column;
      node->lhs = unary();
      return node;
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (at(Tok::StarStar)) {
      Token op = next();
      // Right-associative; the exponent may itself start with unary minus.
      ExprPtr exponent = unary();
      return binary(BinOp::Pow, op, std::move(base), std::move(exponent));
    }
    return base;
  }

  ExprPtr primary() {
    if (at(Tok::Number)) {
      Token t = next();
      auto node = std::make_unique<Expr>();
      node->kind = Expr::Kind::Literal;
      node->line = t.line;
      node->column = t.column;
      node->literal = Rational::from_decimal_string(t.text);
      return node;
    }
    if (at(Tok::Ident)) {
      Token t = next();
      auto node = std::make_unique<Expr>();
      node->kind = Expr::Kind::Var;
      node->line = t.line;
      node->column = t.column;
      node->name = t.text;
      return node;
    }
    if (at(Tok::LParen)) {
      next();
      ExprPtr inner = expression();
      expect(Tok::RParen, "')'");
      return inner;
    }
    throw SyntaxError(peek().line, peek().column,
                      "an expression, got '" + describe(peek()) + "'");
  }

  static ExprPtr binary(BinOp op, const Token& at, ExprPtr lhs, ExprPtr rhs) {
    auto node = std::make_unique<Expr>();
    node->kind = Expr::Kind::Binary;
    node->op = op;
    node->line = at.line;
    node->column = at.column;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }
};

// ---------------------------------------------------------------------------
// Evaluator

class Evaluator {
 public:
  explicit Evaluator(std::size_t step_limit) : limit_(step_limit) {}

  EvalOutcome run(const EquationProgram& program) {
    Rational last_value;
    for (const Assignment& st : program.statements) {
      last_value = eval(*st.expr);
      bindings_[st.target] = last_value;
    }
    EvalOutcome out;
    auto answer = bindings_.find("answer");
    out.answer = answer != bindings_.end() ? answer->second : last_value;
    out.bindings = std::move(bindings_);
    out.steps = steps_;
    return out;
  }

 private:
  std::size_t limit_;
  std::size_t steps_ = 0;
  std::map<std::string, Rational> bindings_;

  Rational eval(const Expr& node) {
    if (++steps_ > limit_)
      throw EvalError(EvalError::Kind::StepLimitExceeded, node.line);
    switch (node.kind) {
      case Expr::Kind::Literal:
        return node.literal;
      case Expr::Kind::Var: {
        auto it = bindings_.find(node.name);
        if (it == bindings_.end())
          throw EvalError(EvalError::Kind::UndefinedVariable, node.line,
                          node.name);
        return it->second;
      }
      case Expr::Kind::Neg:
        return -eval(*node.lhs);
      case Expr::Kind::Binary:
        break;
    }
    Rational lhs = eval(*node.lhs);
    Rational rhs = eval(*node.rhs);
    switch (node.op) {
      case BinOp::Add: return lhs + rhs;
      case BinOp::Sub: return lhs - rhs;
      case BinOp::Mul: return lhs * rhs;
      case BinOp::Div:
        if (rhs.is_zero())
          throw EvalError(EvalError::Kind::DivisionByZero, node.line);
        return lhs / rhs;
      case BinOp::Mod: {
        if (!lhs.is_integer() || !rhs.is_integer())
          throw EvalError(EvalError::Kind::NonIntegerModulo, node.line);
        if (rhs.is_zero())
          throw EvalError(EvalError::Kind::DivisionByZero, node.line);
        return Rational(lhs.numerator() % rhs.numerator(), BigInt(1));
      }
      case BinOp::Pow: {
        if (!rhs.is_integer())
          throw EvalError(EvalError::Kind::NonIntegerExponent, node.line);
        if (!rhs.numerator().fits_int64())
          throw EvalError(EvalError::Kind::ExponentTooLarge, node.line);
        std::int64_t e = rhs.numerator().to_int64();
        if (e > 64 || e < -64)
          throw EvalError(EvalError::Kind::ExponentTooLarge, node.line);
        if (e < 0 && lhs.is_zero())
          throw EvalError(EvalError::Kind::DivisionByZero, node.line);
        return Rational::pow(lhs, e);
      }
    }
    throw std::logic_error("unreachable binary op");
  }
};

}  // namespace

EvalError::EvalError(Kind kind, int line, const std::string& name)
    : std::runtime_error(describe(kind, line, name)),
      kind(kind),
      line(line),
      name(name) {}

std::string EvalError::describe(Kind kind, int line, const std::string& name) {
  std::string what;
  switch (kind) {
    case Kind::UndefinedVariable:
      what = "undefined variable '" + name + "'";
      break;
    case Kind::DivisionByZero: what = "division by zero"; break;
    case Kind::NonIntegerExponent: what = "non-integer exponent"; break;
    case Kind::ExponentTooLarge: what = "exponent magnitude above 64"; break;
    case Kind::NonIntegerModulo: what = "'%' needs integer operands"; break;
    case Kind::StepLimitExceeded: what = "step limit exceeded"; break;
  }
  return what + " (line " + std::to_string(line) + ")";
}

std::string extract_program(std::string_view model_output) {
  std::vector<std::string_view> lines = split_lines(model_output);

  // Route 1: first fenced code block, when it holds any non-blank line.
  std::size_t fence_open = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).substr(0, 3) == "```") {
      fence_open = i;
      break;
    }
  }
  if (fence_open < lines.size()) {
    std::string body;
    bool any = false;
    for (std::size_t i = fence_open + 1; i < lines.size(); ++i) {
      if (trim(lines[i]).substr(0, 3) == "```") break;
      if (!trim(lines[i]).empty()) {
        if (any) body.push_back('\n');
        body += std::string(lines[i]);
        any = true;
      }
    }
    if (any) return body;
  }

  // Route 2: bare `identifier = expression` lines.
  std::string body;
  bool any = false;
  for (std::string_view line : lines) {
    if (looks_like_assignment(line)) {
      if (any) body.push_back('\n');
      body += std::string(trim(line));
      any = true;
    }
  }
  if (!any) throw NoProgramFound();
  return body;
}

EquationProgram parse(std::string_view source) { return Parser(source).run(); }

EvalOutcome evaluate(const EquationProgram& program, std::size_t step_limit) {
  return Evaluator(step_limit).run(program);
}

}  // namespace tandem::eqscript
