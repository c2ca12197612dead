// ballgeo - scalar-field expressions: parse, evaluate, pretty-print
//
// Fields are written over variables x1..x<dim> with numeric literals, the
// operators + - * / ^ (caret binds tightest and is right-associative, unary
// minus allowed), parentheses, and the functions exp, sin, cos, sqrt, tanh.
// They supply conformal factors and matrix entries for metric definitions.
#pragma once

#include "ballgeo/common.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ballgeo {

// A parsed, immutable scalar field on R^dim. Evaluation is pure and safe to
// call concurrently. Division and the partial functions (sqrt, ^) are
// guarded: domain violations raise NumericalError instead of producing NaN.
class FieldExpr {
 public:
  // Parses `source`; raises ValidationError with a position on syntax errors,
  // unknown identifiers, or variable indices exceeding `dim`.
  static FieldExpr parse(const std::string& source, int dim);

  double eval(const Vec& point) const;

  // Minimal-parenthesis rendering; parse(print()) evaluates identically.
  std::string print() const;

  int dim() const { return dim_; }
  const std::string& source() const { return source_; }

  // Postfix tape; each instruction pushes or combines stack slots.
  struct Instr {
    enum class Op : std::uint8_t {
      push_const, push_var, add, sub, mul, div, pow, neg,
      fn_exp, fn_sin, fn_cos, fn_sqrt, fn_tanh
    };
    Op op;
    double value = 0.0;  // push_const
    int var = 0;         // push_var (0-based)
  };

 private:
  FieldExpr() = default;

  std::string source_;
  std::string printed_;
  int dim_ = 0;
  std::vector<Instr> tape_;
  int stack_need_ = 0;

  friend class FieldParser;
};

}  // namespace ballgeo
