#include "cosem/lang.hpp"

#include <cctype>
#include <optional>

namespace cosem {

ParseError::ParseError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error((kind == Kind::Syntax ? "syntax error" : "type error") +
                         (" at " + std::to_string(line) + ":" + std::to_string(column) + ": ") +
                         message),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Ident, Int, Keyword, Symbol, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool is_keyword(std::string_view w) {
  static constexpr std::string_view kKeywords[] = {
      "skip", "if", "then", "else", "fi", "while", "do", "od", "atomic",
      "await", "true", "false", "not", "and", "or"};
  for (auto k : kKeywords)
    if (k == w) return true;
  return false;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {  // line comment
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      out.push_back({is_keyword(word) ? Tok::Keyword : Tok::Ident, word, l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kSymbols[] = {":=", "||", "<=", ";", "(", ")", "{", "}",
                                                    "+",  "-",  "*",  "=", "<", ","};
    bool matched = false;
    for (auto sym : kSymbols) {
      if (src.substr(i, sym.size()) == sym) {
        out.push_back({Tok::Symbol, std::string(sym), l, cl});
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(ParseError::Kind::Syntax, l, cl,
                       "unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  StmtPtr program() {
    auto s = stmt();
    expect_end();
    return s;
  }

  State state_literal() {
    expect("{");
    State::Map vars;
    if (!accept("}")) {
      do {
        const Token& name = peek();
        if (name.kind != Tok::Ident) fail(name, "expected a variable name");
        ++pos_;
        expect("=");
        bool neg = accept("-");
        const Token& num = peek();
        if (num.kind != Tok::Int) fail(num, "expected an integer");
        ++pos_;
        Int v(num.text);
        vars[name.text] = neg ? Int(-v) : v;
      } while (accept(","));
      expect("}");
    }
    expect_end();
    return State(std::move(vars));
  }

 private:
  // A parsed expression together with the position it started at, for
  // sort errors.
  struct Typed {
    ExprPtr expr;
    int line;
    int column;
  };

  const Token& peek() const { return toks_[pos_]; }

  bool at(std::string_view text) const {
    const Token& t = peek();
    return (t.kind == Tok::Symbol || t.kind == Tok::Keyword) && t.text == text;
  }

  bool accept(std::string_view text) {
    if (!at(text)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, t.line, t.column,
                     msg + (t.kind == Tok::End ? " (found end of input)" : " (found '" + t.text + "')"));
  }

  void expect(std::string_view text) {
    if (!accept(text)) fail(peek(), "expected '" + std::string(text) + "'");
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), "unexpected trailing input");
  }

  // stmt ::= seq ('||' stmt)?
  StmtPtr stmt() {
    auto left = seq();
    if (accept("||")) return Stmt::par(left, stmt());
    return left;
  }

  // seq ::= atom (';' seq)?
  StmtPtr seq() {
    auto first = atom();
    if (accept(";")) return Stmt::seq(first, seq());
    return first;
  }

  StmtPtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      ++pos_;
      expect(":=");
      return Stmt::assign(t.text, int_expr());
    }
    if (accept("skip")) return Stmt::skip();
    if (accept("if")) {
      auto g = bool_expr();
      expect("then");
      auto a = stmt();
      expect("else");
      auto b = stmt();
      expect("fi");
      return Stmt::if_(g, a, b);
    }
    if (accept("while")) {
      auto g = bool_expr();
      expect("do");
      auto body = stmt();
      expect("od");
      return Stmt::while_(g, body);
    }
    if (accept("atomic")) {
      expect("{");
      auto body = stmt();
      expect("}");
      return Stmt::atomic(body);
    }
    if (accept("await")) {
      auto g = bool_expr();
      expect("then");
      if (accept("{")) {
        auto body = stmt();
        expect("}");
        return Stmt::await(g, body);
      }
      return Stmt::await(g, atom());
    }
    if (accept("(")) {
      auto s = stmt();
      expect(")");
      return s;
    }
    fail(t, "expected a statement");
  }

  ExprPtr int_expr() {
    auto e = expr();
    if (e.expr->is_boolean())
      throw ParseError(ParseError::Kind::Type, e.line, e.column,
                       "boolean expression used where an integer is expected");
    return e.expr;
  }

  ExprPtr bool_expr() {
    auto e = expr();
    if (!e.expr->is_boolean())
      throw ParseError(ParseError::Kind::Type, e.line, e.column,
                       "integer expression used as a guard");
    return e.expr;
  }

  Typed expect_sort(Typed e, bool boolean, const char* context) {
    if (e.expr->is_boolean() != boolean) {
      throw ParseError(ParseError::Kind::Type, e.line, e.column,
                       std::string(boolean ? "integer" : "boolean") + " operand of " + context);
    }
    return e;
  }

  // Single precedence ladder for both sorts; operators check operand sorts.
  Typed expr() { return disjunction(); }

  Typed disjunction() {
    auto lhs = conjunction();
    while (at("or")) {
      ++pos_;
      expect_sort(lhs, true, "'or'");
      auto rhs = expect_sort(conjunction(), true, "'or'");
      lhs.expr = Expr::disj(lhs.expr, rhs.expr);
    }
    return lhs;
  }

  Typed conjunction() {
    auto lhs = negation();
    while (at("and")) {
      ++pos_;
      expect_sort(lhs, true, "'and'");
      auto rhs = expect_sort(negation(), true, "'and'");
      lhs.expr = Expr::conj(lhs.expr, rhs.expr);
    }
    return lhs;
  }

  Typed negation() {
    const Token& t = peek();
    if (accept("not")) {
      auto operand = expect_sort(negation(), true, "'not'");
      return {Expr::negate(operand.expr), t.line, t.column};
    }
    return comparison();
  }

  Typed comparison() {
    auto lhs = additive();
    std::optional<CmpOp> op;
    if (at("=")) op = CmpOp::Eq;
    else if (at("<")) op = CmpOp::Lt;
    else if (at("<=")) op = CmpOp::Le;
    if (!op) return lhs;
    ++pos_;
    expect_sort(lhs, false, "a comparison");
    auto rhs = expect_sort(additive(), false, "a comparison");
    return {Expr::compare(*op, lhs.expr, rhs.expr), lhs.line, lhs.column};
  }

  Typed additive() {
    auto lhs = multiplicative();
    while (at("+") || at("-")) {
      ArithOp op = peek().text == "+" ? ArithOp::Add : ArithOp::Sub;
      ++pos_;
      expect_sort(lhs, false, "arithmetic");
      auto rhs = expect_sort(multiplicative(), false, "arithmetic");
      lhs.expr = Expr::arith(op, lhs.expr, rhs.expr);
    }
    return lhs;
  }

  Typed multiplicative() {
    auto lhs = primary();
    while (at("*")) {
      ++pos_;
      expect_sort(lhs, false, "arithmetic");
      auto rhs = expect_sort(primary(), false, "arithmetic");
      lhs.expr = Expr::arith(ArithOp::Mul, lhs.expr, rhs.expr);
    }
    return lhs;
  }

  Typed primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
        ++pos_;
        return {Expr::lit(Int(t.text)), t.line, t.column};
      case Tok::Ident:
        ++pos_;
        return {Expr::var(t.text), t.line, t.column};
      default:
        break;
    }
    if (accept("true")) return {Expr::boolean(true), t.line, t.column};
    if (accept("false")) return {Expr::boolean(false), t.line, t.column};
    if (accept("-")) {
      const Token& n = peek();
      if (n.kind != Tok::Int) fail(n, "expected an integer literal after '-'");
      ++pos_;
      return {Expr::lit(-Int(n.text)), t.line, t.column};
    }
    if (accept("(")) {
      auto inner = expr();
      expect(")");
      return {inner.expr, t.line, t.column};
    }
    fail(t, "expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

StmtPtr parse(std::string_view source) { return Parser(source).program(); }

State parse_state(std::string_view source) { return Parser(source).state_literal(); }

}  // namespace cosem
