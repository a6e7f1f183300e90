#include "cosem/lang.hpp"

#include <functional>
#include <limits>
#include <sstream>

namespace cosem {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_int(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() &&
      v <= std::numeric_limits<long long>::max()) {
    return std::hash<long long>{}(v.convert_to<long long>());
  }
  return std::hash<std::string>{}(v.str());
}

std::size_t hash_str(std::string_view s) { return std::hash<std::string_view>{}(s); }

std::size_t hash_map(const State::Map& m) {
  std::size_t h = 0x51ed270b;
  for (const auto& [k, v] : m) h = mix(mix(h, hash_str(k)), hash_int(v));
  return h;
}

const std::shared_ptr<const State::Map>& empty_map() {
  static const auto m = std::make_shared<const State::Map>();
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// State

State::State() : vars_(empty_map()), hash_(hash_map(*vars_)) {}

State::State(Map vars)
    : vars_(std::make_shared<const Map>(std::move(vars))), hash_(hash_map(*vars_)) {}

Int State::lookup(std::string_view name) const {
  auto it = vars_->find(name);
  return it == vars_->end() ? Int(0) : it->second;
}

bool State::contains(std::string_view name) const { return vars_->find(name) != vars_->end(); }

State State::with(const std::string& name, Int value) const {
  Map next = *vars_;
  next[name] = std::move(value);
  return State(std::move(next));
}

std::string State::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : *vars_) {
    if (!first) out += ", ";
    first = false;
    out += k;
    out += '=';
    out += v.str();
  }
  out += '}';
  return out;
}

bool operator==(const State& a, const State& b) {
  return a.vars_ == b.vars_ || (a.hash_ == b.hash_ && *a.vars_ == *b.vars_);
}

bool operator<(const State& a, const State& b) { return *a.vars_ < *b.vars_; }

// ---------------------------------------------------------------------------
// Expressions

namespace {

std::size_t expr_hash(const Expr::Node& n) {
  std::size_t h = mix(0x1234, n.index());
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          h = mix(h, hash_int(e.value));
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          h = mix(h, hash_str(e.name));
        } else if constexpr (std::is_same_v<T, Expr::Arith> ||
                             std::is_same_v<T, Expr::Compare>) {
          h = mix(mix(mix(h, static_cast<std::size_t>(e.op)), e.lhs->hash), e.rhs->hash);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          h = mix(h, e.value ? 1 : 2);
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          h = mix(h, e.operand->hash);
        } else {
          h = mix(mix(h, e.lhs->hash), e.rhs->hash);
        }
      },
      n);
  return h;
}

ExprPtr make_expr(Expr::Node n) {
  auto h = expr_hash(n);
  return std::make_shared<const Expr>(std::move(n), h);
}

}  // namespace

bool Expr::is_boolean() const {
  return !(std::holds_alternative<IntLit>(node) || std::holds_alternative<Var>(node) ||
           std::holds_alternative<Arith>(node));
}

ExprPtr Expr::lit(Int v) { return make_expr(IntLit{std::move(v)}); }
ExprPtr Expr::var(std::string name) { return make_expr(Var{std::move(name)}); }
ExprPtr Expr::arith(ArithOp op, ExprPtr lhs, ExprPtr rhs) {
  return make_expr(Arith{op, std::move(lhs), std::move(rhs)});
}
ExprPtr Expr::compare(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  return make_expr(Compare{op, std::move(lhs), std::move(rhs)});
}
ExprPtr Expr::boolean(bool v) { return make_expr(BoolLit{v}); }
ExprPtr Expr::negate(ExprPtr e) { return make_expr(Not{std::move(e)}); }
ExprPtr Expr::conj(ExprPtr lhs, ExprPtr rhs) { return make_expr(And{std::move(lhs), std::move(rhs)}); }
ExprPtr Expr::disj(ExprPtr lhs, ExprPtr rhs) { return make_expr(Or{std::move(lhs), std::move(rhs)}); }

bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

bool equal(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Arith> ||
                             std::is_same_v<T, Expr::Compare>) {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return equal(x.operand, y.operand);
        } else {
          return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        }
      },
      a.node);
}

Int eval_expr(const Expr& e, const State& st) {
  if (const auto* lit = std::get_if<Expr::IntLit>(&e.node)) return lit->value;
  if (const auto* v = std::get_if<Expr::Var>(&e.node)) return st.lookup(v->name);
  if (const auto* a = std::get_if<Expr::Arith>(&e.node)) {
    Int l = eval_expr(*a->lhs, st);
    Int r = eval_expr(*a->rhs, st);
    switch (a->op) {
      case ArithOp::Add: return l + r;
      case ArithOp::Sub: return l - r;
      case ArithOp::Mul: return l * r;
    }
  }
  throw std::logic_error("eval_expr: boolean expression in value position");
}

bool sat(const Expr& e, const State& st) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Compare>) {
          Int l = eval_expr(*x.lhs, st);
          Int r = eval_expr(*x.rhs, st);
          switch (x.op) {
            case CmpOp::Eq: return l == r;
            case CmpOp::Lt: return l < r;
            case CmpOp::Le: return l <= r;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return !sat(*x.operand, st);
        } else if constexpr (std::is_same_v<T, Expr::And>) {
          return sat(*x.lhs, st) && sat(*x.rhs, st);
        } else if constexpr (std::is_same_v<T, Expr::Or>) {
          return sat(*x.lhs, st) || sat(*x.rhs, st);
        } else {
          throw std::logic_error("sat: integer expression in guard position");
        }
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Statements

namespace {

std::size_t stmt_hash(const Stmt::Node& n) {
  std::size_t h = mix(0xabcd, n.index());
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          h = mix(mix(h, hash_str(s.var)), s.value->hash);
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          h = mix(mix(h, s.first->hash), s.second->hash);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          h = mix(mix(mix(h, s.guard->hash), s.then_branch->hash), s.else_branch->hash);
        } else if constexpr (std::is_same_v<T, Stmt::While> || std::is_same_v<T, Stmt::Await>) {
          h = mix(mix(h, s.guard->hash), s.body->hash);
        } else if constexpr (std::is_same_v<T, Stmt::Par> || std::is_same_v<T, Stmt::ParL> ||
                             std::is_same_v<T, Stmt::ParR>) {
          h = mix(mix(h, s.left->hash), s.right->hash);
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          h = mix(h, s.body->hash);
        }
      },
      n);
  return h;
}

StmtPtr make_stmt(Stmt::Node n) {
  auto h = stmt_hash(n);
  return std::make_shared<const Stmt>(std::move(n), h);
}

}  // namespace

StmtPtr Stmt::assign(std::string var, ExprPtr value) {
  return make_stmt(Assign{std::move(var), std::move(value)});
}
StmtPtr Stmt::skip() {
  static const StmtPtr s = make_stmt(Skip{});
  return s;
}
StmtPtr Stmt::seq(StmtPtr first, StmtPtr second) {
  return make_stmt(Seq{std::move(first), std::move(second)});
}
StmtPtr Stmt::if_(ExprPtr guard, StmtPtr then_branch, StmtPtr else_branch) {
  return make_stmt(If{std::move(guard), std::move(then_branch), std::move(else_branch)});
}
StmtPtr Stmt::while_(ExprPtr guard, StmtPtr body) {
  return make_stmt(While{std::move(guard), std::move(body)});
}
StmtPtr Stmt::par(StmtPtr left, StmtPtr right) {
  return make_stmt(Par{std::move(left), std::move(right)});
}
StmtPtr Stmt::atomic(StmtPtr body) { return make_stmt(Atomic{std::move(body)}); }
StmtPtr Stmt::await(ExprPtr guard, StmtPtr body) {
  return make_stmt(Await{std::move(guard), std::move(body)});
}
StmtPtr Stmt::par_l(StmtPtr left, StmtPtr right) {
  return make_stmt(ParL{std::move(left), std::move(right)});
}
StmtPtr Stmt::par_r(StmtPtr left, StmtPtr right) {
  return make_stmt(ParR{std::move(left), std::move(right)});
}
StmtPtr Stmt::suspend() {
  static const StmtPtr s = make_stmt(Suspend{});
  return s;
}

bool equal(const StmtPtr& a, const StmtPtr& b) { return equal(*a, *b); }

bool equal(const Stmt& a, const Stmt& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return x.var == y.var && equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          return equal(x.first, y.first) && equal(x.second, y.second);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return equal(x.guard, y.guard) && equal(x.then_branch, y.then_branch) &&
                 equal(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, Stmt::While> || std::is_same_v<T, Stmt::Await>) {
          return equal(x.guard, y.guard) && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, Stmt::Par> || std::is_same_v<T, Stmt::ParL> ||
                             std::is_same_v<T, Stmt::ParR>) {
          return equal(x.left, y.left) && equal(x.right, y.right);
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          return equal(x.body, y.body);
        } else {
          return true;
        }
      },
      a.node);
}

namespace {

template <class F>
void for_each_child(const Stmt& s, F&& f) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Seq>) {
          f(*x.first);
          f(*x.second);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          f(*x.then_branch);
          f(*x.else_branch);
        } else if constexpr (std::is_same_v<T, Stmt::While> || std::is_same_v<T, Stmt::Await> ||
                             std::is_same_v<T, Stmt::Atomic>) {
          f(*x.body);
        } else if constexpr (std::is_same_v<T, Stmt::Par> || std::is_same_v<T, Stmt::ParL> ||
                             std::is_same_v<T, Stmt::ParR>) {
          f(*x.left);
          f(*x.right);
        }
      },
      s.node);
}

const Expr* guard_of(const Stmt& s) {
  if (const auto* i = s.as<Stmt::If>()) return i->guard.get();
  if (const auto* w = s.as<Stmt::While>()) return w->guard.get();
  if (const auto* a = s.as<Stmt::Await>()) return a->guard.get();
  if (const auto* a = s.as<Stmt::Assign>()) return a->value.get();
  return nullptr;
}

std::size_t expr_size(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Arith> || std::is_same_v<T, Expr::Compare> ||
                      std::is_same_v<T, Expr::And> || std::is_same_v<T, Expr::Or>) {
          return 1 + expr_size(*x.lhs) + expr_size(*x.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return 1 + expr_size(*x.operand);
        } else {
          return 1;
        }
      },
      e.node);
}

void expr_reads(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          out.insert(x.name);
        } else if constexpr (std::is_same_v<T, Expr::Arith> || std::is_same_v<T, Expr::Compare> ||
                             std::is_same_v<T, Expr::And> || std::is_same_v<T, Expr::Or>) {
          expr_reads(*x.lhs, out);
          expr_reads(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          expr_reads(*x.operand, out);
        }
      },
      e.node);
}

void collect(const Stmt& s, std::set<std::string>& reads, std::set<std::string>& writes) {
  if (const auto* e = guard_of(s)) expr_reads(*e, reads);
  if (const auto* a = s.as<Stmt::Assign>()) writes.insert(a->var);
  for_each_child(s, [&](const Stmt& c) { collect(c, reads, writes); });
}

}  // namespace

bool has_auxiliary_forms(const Stmt& s) {
  if (s.is<Stmt::ParL>() || s.is<Stmt::ParR>() || s.is<Stmt::Suspend>()) return true;
  bool found = false;
  for_each_child(s, [&](const Stmt& c) { found = found || has_auxiliary_forms(c); });
  return found;
}

std::size_t size(const Stmt& s) {
  std::size_t n = 1;
  if (const auto* e = guard_of(s)) n += expr_size(*e);
  for_each_child(s, [&](const Stmt& c) { n += size(c); });
  return n;
}

std::set<std::string> variables(const Stmt& s) {
  std::set<std::string> reads, writes;
  collect(s, reads, writes);
  reads.insert(writes.begin(), writes.end());
  return reads;
}

std::set<std::string> unassigned_reads(const Stmt& s) {
  std::set<std::string> reads, writes;
  collect(s, reads, writes);
  std::set<std::string> out;
  for (const auto& r : reads)
    if (!writes.count(r)) out.insert(r);
  return out;
}

// ---------------------------------------------------------------------------
// Pretty printing
//
// Precedence levels, loosest first. Statements: par 0, seq 1, atom 2.
// Integer expressions: additive 0, multiplicative 1, primary 2.
// Boolean expressions: or 0, and 1, not 2, comparison/literal 3.

namespace {

void print_expr(const Expr& e, int level, std::string& out);

int expr_level(const Expr& e) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Arith>) {
          return x.op == ArithOp::Mul ? 1 : 0;
        } else if constexpr (std::is_same_v<T, Expr::Or>) {
          return 0;
        } else if constexpr (std::is_same_v<T, Expr::And>) {
          return 1;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return 2;
        } else if constexpr (std::is_same_v<T, Expr::Compare> || std::is_same_v<T, Expr::BoolLit>) {
          return 3;
        } else {
          return 2;
        }
      },
      e.node);
}

void print_expr(const Expr& e, int level, std::string& out) {
  bool parens = expr_level(e) < level;
  if (parens) out += '(';
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          if (x.value < 0) {
            out += '(';
            out += x.value.str();
            out += ')';
          } else {
            out += x.value.str();
          }
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, Expr::Arith>) {
          int own = x.op == ArithOp::Mul ? 1 : 0;
          print_expr(*x.lhs, own, out);
          out += x.op == ArithOp::Add ? "+" : x.op == ArithOp::Sub ? "-" : "*";
          print_expr(*x.rhs, own + 1, out);
        } else if constexpr (std::is_same_v<T, Expr::Compare>) {
          print_expr(*x.lhs, 0, out);
          out += x.op == CmpOp::Eq ? " = " : x.op == CmpOp::Lt ? " < " : " <= ";
          print_expr(*x.rhs, 0, out);
        } else if constexpr (std::is_same_v<T, Expr::BoolLit>) {
          out += x.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          out += "not ";
          print_expr(*x.operand, 2, out);
        } else if constexpr (std::is_same_v<T, Expr::And>) {
          print_expr(*x.lhs, 1, out);
          out += " and ";
          print_expr(*x.rhs, 2, out);
        } else {
          print_expr(*x.lhs, 0, out);
          out += " or ";
          print_expr(*x.rhs, 1, out);
        }
      },
      e.node);
  if (parens) out += ')';
}

int stmt_level(const Stmt& s) {
  if (s.is<Stmt::Par>() || s.is<Stmt::ParL>() || s.is<Stmt::ParR>()) return 0;
  if (s.is<Stmt::Seq>()) return 1;
  return 2;
}

void print_stmt(const Stmt& s, int level, std::string& out);

void print_par_child(const Stmt& s, bool right, std::string& out) {
  // Sequences under || are parenthesised for readability; the parser does
  // not need it.
  int lvl = stmt_level(s);
  if (lvl == 1 || (lvl == 0 && !right)) {
    out += '(';
    print_stmt(s, 0, out);
    out += ')';
  } else {
    print_stmt(s, 0, out);
  }
}

void print_stmt(const Stmt& s, int level, std::string& out) {
  bool parens = stmt_level(s) < level;
  if (parens) out += '(';
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          out += x.var;
          out += " := ";
          print_expr(*x.value, 0, out);
        } else if constexpr (std::is_same_v<T, Stmt::Skip>) {
          out += "skip";
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          print_stmt(*x.first, 2, out);
          out += "; ";
          print_stmt(*x.second, 1, out);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          out += "if ";
          print_expr(*x.guard, 0, out);
          out += " then ";
          print_stmt(*x.then_branch, 0, out);
          out += " else ";
          print_stmt(*x.else_branch, 0, out);
          out += " fi";
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          out += "while ";
          print_expr(*x.guard, 0, out);
          out += " do ";
          print_stmt(*x.body, 0, out);
          out += " od";
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          print_par_child(*x.left, false, out);
          out += " || ";
          print_par_child(*x.right, true, out);
        } else if constexpr (std::is_same_v<T, Stmt::ParL> || std::is_same_v<T, Stmt::ParR>) {
          print_par_child(*x.left, false, out);
          out += std::is_same_v<T, Stmt::ParL> ? " ⌊ " : " ⌋ ";
          print_par_child(*x.right, true, out);
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          out += "atomic { ";
          print_stmt(*x.body, 0, out);
          out += " }";
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          out += "await ";
          print_expr(*x.guard, 0, out);
          out += " then ";
          if (stmt_level(*x.body) == 2 && !x.body->template is<Stmt::Suspend>()) {
            print_stmt(*x.body, 2, out);
          } else {
            out += "{ ";
            print_stmt(*x.body, 0, out);
            out += " }";
          }
        } else {
          out += "suspend";
        }
      },
      s.node);
  if (parens) out += ')';
}

}  // namespace

std::string pretty(const Stmt& s) {
  std::string out;
  print_stmt(s, 0, out);
  return out;
}

std::string pretty(const Expr& e) {
  std::string out;
  print_expr(e, 0, out);
  return out;
}

}  // namespace cosem
