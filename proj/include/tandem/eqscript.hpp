#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tandem/rational.hpp"

namespace tandem::eqscript {

/// Default cap on evaluated expression nodes; GSM8K-scale programs use a few
/// dozen, the cap only bounds adversarial model output.
inline constexpr std::size_t kDefaultStepLimit = 10'000;

enum class BinOp { Add, Sub, Mul, Div, Mod, Pow };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

/// Expression node. Exactly one of the payloads is meaningful per kind.
struct Expr {
  enum class Kind { Literal, Var, Neg, Binary };

  Kind kind;
  int line = 0;
  int column = 0;

  Rational literal;       // Kind::Literal
  std::string name;       // Kind::Var
  BinOp op = BinOp::Add;  // Kind::Binary
  ExprPtr lhs;            // Kind::Neg operand / Kind::Binary left
  ExprPtr rhs;            // Kind::Binary right
};

struct Assignment {
  std::string target;
  ExprPtr expr;
  int line = 0;
};

/// Parsed equation script: an ordered chain of assignments. Reassignment of
/// a target is allowed; reads of unassigned identifiers surface at
/// evaluation time.
struct EquationProgram {
  std::vector<Assignment> statements;
  std::string source;
};

struct EvalOutcome {
  Rational answer;
  std::map<std::string, Rational> bindings;
  std::size_t steps = 0;
};

struct NoProgramFound : std::runtime_error {
  NoProgramFound() : std::runtime_error("no program found in model output") {}
};

struct SyntaxError : std::runtime_error {
  int line;
  int column;
  std::string expected;

  SyntaxError(int line, int column, std::string expected_what)
      : std::runtime_error("syntax error at line " + std::to_string(line) +
                           ", column " + std::to_string(column) +
                           ": expected " + expected_what),
        line(line),
        column(column),
        expected(std::move(expected_what)) {}
};

struct EvalError : std::runtime_error {
  enum class Kind {
    UndefinedVariable,
    DivisionByZero,
    NonIntegerExponent,
    ExponentTooLarge,
    NonIntegerModulo,
    StepLimitExceeded,
  };

  Kind kind;
  int line;
  std::string name;  // offending identifier for UndefinedVariable

  EvalError(Kind kind, int line, const std::string& name = "");
  static std::string describe(Kind kind, int line, const std::string& name);
};

/// Pulls the equation script out of raw model output: the contents of the
/// first fenced code block when one holds any line, otherwise every line of
/// the form `identifier = expression`, in order. Throws NoProgramFound when
/// neither route yields a line.
std::string extract_program(std::string_view model_output);

/// Grammar, low to high precedence: `+ -` | `* / %` | unary `-` | `**`
/// (right-associative) | parentheses. Literals are unsigned decimals.
/// One `ident = expr` statement per line; blank lines are skipped.
EquationProgram parse(std::string_view source);

/// Runs the statements in order under exact rational arithmetic. The result
/// is the value bound to `answer` when that identifier was assigned,
/// otherwise the last statement's value. `%` needs integer operands
/// (truncated, sign follows the dividend); `**` needs an integer exponent e
/// with |e| <= 64, negative e allowed.
EvalOutcome evaluate(const EquationProgram& program,
                     std::size_t step_limit = kDefaultStepLimit);

}  // namespace tandem::eqscript
