// ballgeo - recursive-descent parser and tape evaluator for scalar fields
#include "ballgeo/fieldexpr.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace ballgeo {

namespace {

// AST used only during parsing/printing; evaluation runs on the flat tape.
struct Node {
  enum class Kind { constant, variable, unary_minus, binary, func };
  Kind kind;
  double value = 0.0;            // constant
  int var = 0;                   // variable (0-based)
  char op = 0;                   // binary: + - * / ^
  FieldExpr::Instr::Op fn{};     // func
  std::string fn_name;
  std::unique_ptr<Node> a, b;
};

int precedence_of(const Node& n) {
  switch (n.kind) {
    case Node::Kind::binary:
      if (n.op == '+' || n.op == '-') return 1;
      if (n.op == '*' || n.op == '/') return 2;
      return 4;  // ^
    case Node::Kind::unary_minus:
      return 3;
    default:
      return 5;  // atoms never need parentheses
  }
}

}  // namespace

class FieldParser {
 public:
  FieldParser(const std::string& src, int dim) : src_(src), dim_(dim) {}

  std::unique_ptr<Node> run() {
    auto root = parse_additive();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return root;
  }

  static void flatten(const Node& n, std::vector<FieldExpr::Instr>& tape) {
    using Op = FieldExpr::Instr::Op;
    switch (n.kind) {
      case Node::Kind::constant:
        tape.push_back({Op::push_const, n.value, 0});
        break;
      case Node::Kind::variable:
        tape.push_back({Op::push_var, 0.0, n.var});
        break;
      case Node::Kind::unary_minus:
        flatten(*n.a, tape);
        tape.push_back({Op::neg, 0.0, 0});
        break;
      case Node::Kind::func:
        flatten(*n.a, tape);
        tape.push_back({n.fn, 0.0, 0});
        break;
      case Node::Kind::binary: {
        flatten(*n.a, tape);
        flatten(*n.b, tape);
        Op op = Op::add;
        if (n.op == '-') op = Op::sub;
        else if (n.op == '*') op = Op::mul;
        else if (n.op == '/') op = Op::div;
        else if (n.op == '^') op = Op::pow;
        tape.push_back({op, 0.0, 0});
        break;
      }
    }
  }

  static void print_node(const Node& n, std::ostringstream& out) {
    const auto bracket = [&](const Node& child, bool need) {
      if (need) out << '(';
      print_node(child, out);
      if (need) out << ')';
    };
    switch (n.kind) {
      case Node::Kind::constant: {
        std::ostringstream num;
        num.precision(17);
        num << n.value;
        out << num.str();
        break;
      }
      case Node::Kind::variable:
        out << 'x' << (n.var + 1);
        break;
      case Node::Kind::unary_minus:
        out << '-';
        bracket(*n.a, precedence_of(*n.a) < precedence_of(n));
        break;
      case Node::Kind::func:
        out << n.fn_name << '(';
        print_node(*n.a, out);
        out << ')';
        break;
      case Node::Kind::binary: {
        const int p = precedence_of(n);
        // left child: parenthesize on lower precedence (all our binary ops at
        // equal precedence associate left except ^, which never takes a bare
        // binary left child of its own precedence anyway)
        bracket(*n.a, precedence_of(*n.a) < p || (n.op == '^' && precedence_of(*n.a) <= p));
        out << n.op;
        // right child: - and / are left-associative, so equal precedence on
        // the right needs parentheses; ^ is right-associative
        const bool right_needs =
            precedence_of(*n.b) < p ||
            ((n.op == '-' || n.op == '/') && precedence_of(*n.b) == p);
        bracket(*n.b, right_needs);
        break;
      }
    }
  }

 private:
  const std::string& src_;
  int dim_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream out;
    out << "field expression error at position " << pos_ << ": " << msg;
    throw ValidationError(out.str());
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  std::unique_ptr<Node> parse_additive() {
    auto lhs = parse_multiplicative();
    for (;;) {
      if (eat('+')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::binary;
        n->op = '+';
        n->a = std::move(lhs);
        n->b = parse_multiplicative();
        lhs = std::move(n);
      } else if (eat('-')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::binary;
        n->op = '-';
        n->a = std::move(lhs);
        n->b = parse_multiplicative();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> parse_multiplicative() {
    auto lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::binary;
        n->op = '*';
        n->a = std::move(lhs);
        n->b = parse_unary();
        lhs = std::move(n);
      } else if (eat('/')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::binary;
        n->op = '/';
        n->a = std::move(lhs);
        n->b = parse_unary();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> parse_unary() {
    if (eat('-')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::unary_minus;
      n->a = parse_unary();
      return n;
    }
    return parse_power();
  }

  std::unique_ptr<Node> parse_power() {
    auto base = parse_atom();
    if (eat('^')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::binary;
      n->op = '^';
      n->a = std::move(base);
      n->b = parse_unary();  // right-associative; allows 2^-3
      return n;
    }
    return base;
  }

  std::unique_ptr<Node> parse_atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      auto inner = parse_additive();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::constant;
      n->value = value;
      return n;
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string ident = src_.substr(start, pos_ - start);

      if (ident.size() >= 2 && ident[0] == 'x' &&
          std::isdigit(static_cast<unsigned char>(ident[1]))) {
        char* end = nullptr;
        const long idx = std::strtol(ident.c_str() + 1, &end, 10);
        if (*end != '\0') {
          pos_ = start;
          fail("unknown identifier '" + ident + "'");
        }
        if (idx < 1 || idx > dim_) {
          pos_ = start;
          fail("variable index " + std::to_string(idx) + " exceeds dimension " +
               std::to_string(dim_));
        }
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::variable;
        n->var = static_cast<int>(idx - 1);
        return n;
      }

      using Op = FieldExpr::Instr::Op;
      Op fn;
      if (ident == "exp") fn = Op::fn_exp;
      else if (ident == "sin") fn = Op::fn_sin;
      else if (ident == "cos") fn = Op::fn_cos;
      else if (ident == "sqrt") fn = Op::fn_sqrt;
      else if (ident == "tanh") fn = Op::fn_tanh;
      else {
        pos_ = start;
        fail("unknown identifier '" + ident + "'");
      }
      if (!eat('(')) fail("expected '(' after function name");
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::func;
      n->fn = fn;
      n->fn_name = ident;
      n->a = parse_additive();
      if (!eat(')')) fail("expected ')'");
      return n;
    }

    fail(std::string("unexpected character '") + c + "'");
  }
};

FieldExpr FieldExpr::parse(const std::string& source, int dim) {
  if (dim < 2 || dim > 4) throw ValidationError("field expression: dim must be 2, 3 or 4");
  FieldParser parser(source, dim);
  auto root = parser.run();

  FieldExpr expr;
  expr.source_ = source;
  expr.dim_ = dim;
  FieldParser::flatten(*root, expr.tape_);
  {
    std::ostringstream out;
    FieldParser::print_node(*root, out);
    expr.printed_ = out.str();
  }
  int depth = 0, peak = 0;
  for (const Instr& ins : expr.tape_) {
    switch (ins.op) {
      case Instr::Op::push_const:
      case Instr::Op::push_var:
        ++depth;
        break;
      case Instr::Op::add:
      case Instr::Op::sub:
      case Instr::Op::mul:
      case Instr::Op::div:
      case Instr::Op::pow:
        --depth;
        break;
      default:
        break;  // unary ops keep depth
    }
    peak = std::max(peak, depth);
  }
  expr.stack_need_ = peak;
  if (peak > 64) throw ValidationError("field expression: nesting too deep");
  return expr;
}

double FieldExpr::eval(const Vec& point) const {
  if (point.size() != dim_) {
    throw ValidationError("field expression: point dimension mismatch");
  }
  double stack[64];
  int top = 0;
  for (const Instr& ins : tape_) {
    switch (ins.op) {
      case Instr::Op::push_const:
        stack[top++] = ins.value;
        break;
      case Instr::Op::push_var:
        stack[top++] = point[ins.var];
        break;
      case Instr::Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Instr::Op::add:
        stack[top - 2] += stack[top - 1];
        --top;
        break;
      case Instr::Op::sub:
        stack[top - 2] -= stack[top - 1];
        --top;
        break;
      case Instr::Op::mul:
        stack[top - 2] *= stack[top - 1];
        --top;
        break;
      case Instr::Op::div: {
        const double den = stack[top - 1];
        if (std::abs(den) < 1e-300) {
          throw NumericalError("field expression: division by (near-)zero");
        }
        stack[top - 2] /= den;
        --top;
        break;
      }
      case Instr::Op::pow: {
        const double base = stack[top - 2];
        const double ex = stack[top - 1];
        if (base < 0.0 && ex != std::floor(ex)) {
          throw NumericalError("field expression: negative base with non-integer exponent");
        }
        if (base == 0.0 && ex < 0.0) {
          throw NumericalError("field expression: zero base with negative exponent");
        }
        const double r = std::pow(base, ex);
        if (!std::isfinite(r)) {
          throw NumericalError("field expression: power overflow");
        }
        stack[top - 2] = r;
        --top;
        break;
      }
      case Instr::Op::fn_exp: {
        const double r = std::exp(stack[top - 1]);
        if (!std::isfinite(r)) throw NumericalError("field expression: exp overflow");
        stack[top - 1] = r;
        break;
      }
      case Instr::Op::fn_sin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case Instr::Op::fn_cos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
      case Instr::Op::fn_sqrt: {
        const double a = stack[top - 1];
        if (a < 0.0) throw NumericalError("field expression: sqrt of negative value");
        stack[top - 1] = std::sqrt(a);
        break;
      }
      case Instr::Op::fn_tanh:
        stack[top - 1] = std::tanh(stack[top - 1]);
        break;
    }
  }
  return stack[0];
}

std::string FieldExpr::print() const { return printed_; }

}  // namespace ballgeo
