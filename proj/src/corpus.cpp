#include "cosem/corpus.hpp"

#include <random>

namespace cosem {

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  StmtPtr stmt(std::size_t n, bool in_atomic_loop, bool in_atomic) {
    if (n <= 1) {
      if (pick(2) == 0) return Stmt::skip();
      return Stmt::assign(var_name(), Expr::lit(static_cast<int>(pick(4))));
    }
    enum { Assign, Seq, If, While, Par, Atomic, Await };
    for (;;) {
      int c = static_cast<int>(pick(7));
      if (c == Par && in_atomic_loop) continue;
      if (c == If && n < 3) continue;
      switch (c) {
        case Assign:
          if (n > 3) continue;
          return Stmt::assign(var_name(), arith(2));
        case Seq: {
          std::size_t a = 1 + pick(n - 1);
          return Stmt::seq(stmt(a, in_atomic_loop, in_atomic),
                           stmt(n - a, in_atomic_loop, in_atomic));
        }
        case If: {
          std::size_t a = 1 + pick(n - 2);
          return Stmt::if_(guard(2), stmt(a, in_atomic_loop, in_atomic),
                           stmt(n - 1 - a, in_atomic_loop, in_atomic));
        }
        case While:
          return loop(n, in_atomic_loop || in_atomic, in_atomic);
        case Par: {
          std::size_t a = 1 + pick(n - 1);
          return Stmt::par(stmt(a, false, in_atomic), stmt(n - a, false, in_atomic));
        }
        case Atomic:
          return Stmt::atomic(stmt(n - 1, in_atomic_loop, true));
        case Await:
          return Stmt::await(guard(2), stmt(n - 1, in_atomic_loop, true));
      }
    }
  }

 private:
  // Mostly counting loops; the rest have arbitrary guards.
  StmtPtr loop(std::size_t n, bool no_par, bool in_atomic) {
    std::string v = var_name();
    if (n >= 3 && pick(3) != 0) {
      auto bound = Expr::lit(static_cast<int>(1 + pick(3)));
      auto step = Stmt::assign(v, Expr::arith(ArithOp::Add, Expr::var(v), Expr::lit(1)));
      StmtPtr body = n == 3 ? step : Stmt::seq(stmt(n - 3, no_par, in_atomic), step);
      return Stmt::while_(Expr::compare(CmpOp::Lt, Expr::var(v), bound), body);
    }
    return Stmt::while_(guard(2), stmt(n - 1, no_par, in_atomic));
  }

  ExprPtr arith(int d) {
    std::size_t c = d <= 0 ? pick(2) : pick(5);
    switch (c) {
      case 0: return Expr::lit(static_cast<int>(pick(4)));
      case 1: return Expr::var(var_name());
      case 2: return Expr::arith(ArithOp::Add, arith(d - 1), arith(d - 1));
      case 3: return Expr::arith(ArithOp::Sub, arith(d - 1), arith(d - 1));
      default: return Expr::arith(ArithOp::Mul, arith(d - 1), arith(d - 1));
    }
  }

  ExprPtr guard(int d) {
    std::size_t c = d <= 0 ? pick(2) : pick(7);
    static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Lt, CmpOp::Le};
    switch (c) {
      case 0:
      case 3:
      case 4:
        return Expr::compare(ops[pick(3)], arith(1), arith(1));
      case 1: return Expr::boolean(pick(2) == 0);
      case 2: return Expr::negate(guard(d - 1));
      case 5: return Expr::conj(guard(d - 1), guard(d - 1));
      default: return Expr::disj(guard(d - 1), guard(d - 1));
    }
  }

  std::string var_name() { return pick(2) == 0 ? "x" : "y"; }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 public:
  std::size_t size_draw(std::size_t max_size) { return 1 + pick(max_size); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::vector<CorpusEntry> gen_corpus(std::uint64_t seed, std::size_t count, std::size_t max_size) {
  Gen g(seed);
  std::vector<CorpusEntry> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t n = g.size_draw(max_size);
    out.push_back({g.stmt(n, false, false), State()});
  }
  return out;
}

std::vector<State> corpus_states() {
  return {State(), State({{"x", 1}, {"y", 2}}), State({{"x", 3}, {"y", 0}})};
}

}  // namespace cosem
