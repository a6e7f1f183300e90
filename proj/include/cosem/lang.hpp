#pragma once

// Abstract syntax, variable stores and expression evaluation for the
// shared-variable statement language.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cosem {

using Int = boost::multiprecision::cpp_int;

/// Immutable finite map from identifiers to integers. Unmapped
/// identifiers read as 0. Copies share storage.
class State {
 public:
  using Map = std::map<std::string, Int, std::less<>>;

  State();
  explicit State(Map vars);

  Int lookup(std::string_view name) const;
  bool contains(std::string_view name) const;
  State with(const std::string& name, Int value) const;

  const Map& vars() const { return *vars_; }
  std::size_t hash() const { return hash_; }

  /// `{x=0, y=3}`; keys in ascending order.
  std::string to_string() const;

  friend bool operator==(const State& a, const State& b);
  friend bool operator<(const State& a, const State& b);

 private:
  std::shared_ptr<const Map> vars_;
  std::size_t hash_ = 0;
};

bool operator==(const State& a, const State& b);
inline bool operator!=(const State& a, const State& b) { return !(a == b); }
bool operator<(const State& a, const State& b);

// ---------------------------------------------------------------------------
// Expressions

enum class ArithOp { Add, Sub, Mul };
enum class CmpOp { Eq, Lt, Le };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct IntLit { Int value; };
  struct Var { std::string name; };
  struct Arith { ArithOp op; ExprPtr lhs, rhs; };
  struct Compare { CmpOp op; ExprPtr lhs, rhs; };
  struct BoolLit { bool value; };
  struct Not { ExprPtr operand; };
  struct And { ExprPtr lhs, rhs; };
  struct Or { ExprPtr lhs, rhs; };

  using Node = std::variant<IntLit, Var, Arith, Compare, BoolLit, Not, And, Or>;

  Node node;
  std::size_t hash;

  bool is_boolean() const;

  static ExprPtr lit(Int v);
  static ExprPtr var(std::string name);
  static ExprPtr arith(ArithOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr compare(CmpOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr boolean(bool v);
  static ExprPtr negate(ExprPtr e);
  static ExprPtr conj(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr disj(ExprPtr lhs, ExprPtr rhs);

  Expr(Node n, std::size_t h) : node(std::move(n)), hash(h) {}
};

bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

/// Value of an integer-sorted expression.
Int eval_expr(const Expr& e, const State& st);
/// Truth of a boolean-sorted expression.
bool sat(const Expr& e, const State& st);

// ---------------------------------------------------------------------------
// Statements

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  struct Assign { std::string var; ExprPtr value; };
  struct Skip {};
  struct Seq { StmtPtr first, second; };
  struct If { ExprPtr guard; StmtPtr then_branch, else_branch; };
  struct While { ExprPtr guard; StmtPtr body; };
  struct Par { StmtPtr left, right; };
  struct Atomic { StmtPtr body; };
  struct Await { ExprPtr guard; StmtPtr body; };
  // Auxiliary forms produced only by single-step reduction.
  struct ParL { StmtPtr left, right; };  // left thread makes the first step
  struct ParR { StmtPtr left, right; };  // right thread makes the first step
  struct Suspend {};

  using Node = std::variant<Assign, Skip, Seq, If, While, Par, Atomic, Await,
                            ParL, ParR, Suspend>;

  Node node;
  std::size_t hash;

  static StmtPtr assign(std::string var, ExprPtr value);
  static StmtPtr skip();
  static StmtPtr seq(StmtPtr first, StmtPtr second);
  static StmtPtr if_(ExprPtr guard, StmtPtr then_branch, StmtPtr else_branch);
  static StmtPtr while_(ExprPtr guard, StmtPtr body);
  static StmtPtr par(StmtPtr left, StmtPtr right);
  static StmtPtr atomic(StmtPtr body);
  static StmtPtr await(ExprPtr guard, StmtPtr body);
  static StmtPtr par_l(StmtPtr left, StmtPtr right);
  static StmtPtr par_r(StmtPtr left, StmtPtr right);
  static StmtPtr suspend();

  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <class T>
  const T* as() const { return std::get_if<T>(&node); }

  Stmt(Node n, std::size_t h) : node(std::move(n)), hash(h) {}
};

bool equal(const Stmt& a, const Stmt& b);
bool equal(const StmtPtr& a, const StmtPtr& b);

bool has_auxiliary_forms(const Stmt& s);
/// Number of statement and expression nodes.
std::size_t size(const Stmt& s);

/// Variables occurring anywhere in `s`, read or written.
std::set<std::string> variables(const Stmt& s);
/// Variables read by some expression but never assigned in `s`.
std::set<std::string> unassigned_reads(const Stmt& s);

// ---------------------------------------------------------------------------
// Concrete syntax

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Type };

  ParseError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

StmtPtr parse(std::string_view source);
/// Parses `{x=0, y=3}`.
State parse_state(std::string_view source);

std::string pretty(const Stmt& s);
std::string pretty(const Expr& e);

}  // namespace cosem
