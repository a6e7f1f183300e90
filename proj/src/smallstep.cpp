#include "cosem/smallstep.hpp"

#include <functional>
#include <stdexcept>

namespace cosem {

namespace {

using StmtCtx = StmtPtr (*)(const StmtPtr&, const StmtPtr&);

// Lifts the step of an active substatement through an evaluation context
// `wrap`. The ret case is context-specific and handled by callers.
XCfg lift(const XCfg& inner, const std::function<StmtPtr(const StmtPtr&)>& wrap,
          const std::function<StmtPtr(const StmtPtr&)>& on_yield) {
  return std::visit(
      [&](const auto& c) -> XCfg {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, xcfg::Delay>) {
          return xcfg::Delay{wrap(c.stmt), c.state};
        } else if constexpr (std::is_same_v<T, xcfg::Plus>) {
          return xcfg::Plus{wrap(c.left), c.left_state, wrap(c.right), c.right_state};
        } else if constexpr (std::is_same_v<T, xcfg::Yield>) {
          return xcfg::Yield{on_yield(c.stmt), c.state};
        } else {
          throw std::logic_error("lift: ret handled by caller");
        }
      },
      inner);
}

}  // namespace

XCfg red(const StmtPtr& s, const State& st, SchedMode mode) {
  const bool preemptive = mode == SchedMode::Preemptive;
  return std::visit(
      [&](const auto& n) -> XCfg {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return xcfg::Delay{Stmt::skip(), st.with(n.var, eval_expr(*n.value, st))};
        } else if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return xcfg::Ret{st};
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          XCfg first = red(n.first, st, mode);
          if (const auto* done = std::get_if<xcfg::Ret>(&first)) {
            // Preemptive: control release between the two halves.
            if (preemptive) return xcfg::Yield{n.second, done->state};
            return red(n.second, done->state, mode);
          }
          auto wrap = [&](const StmtPtr& s0) { return Stmt::seq(s0, n.second); };
          return lift(first, wrap, wrap);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          const StmtPtr& branch = sat(*n.guard, st) ? n.then_branch : n.else_branch;
          return xcfg::Delay{preemptive ? Stmt::seq(Stmt::skip(), branch) : branch, st};
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (!sat(*n.guard, st)) return xcfg::Delay{Stmt::skip(), st};
          StmtPtr again = Stmt::seq(n.body, s);
          return xcfg::Delay{preemptive ? Stmt::seq(Stmt::skip(), again) : again, st};
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          return xcfg::Plus{Stmt::par_l(n.left, n.right), st, Stmt::par_r(n.left, n.right), st};
        } else if constexpr (std::is_same_v<T, Stmt::ParL>) {
          XCfg step = red(n.left, st, mode);
          if (const auto* done = std::get_if<xcfg::Ret>(&step)) {
            if (preemptive) return xcfg::Yield{n.right, done->state};
            return red(n.right, done->state, mode);
          }
          return lift(
              step, [&](const StmtPtr& s0) { return Stmt::par_l(s0, n.right); },
              [&](const StmtPtr& s0) { return Stmt::par(s0, n.right); });
        } else if constexpr (std::is_same_v<T, Stmt::ParR>) {
          XCfg step = red(n.right, st, mode);
          if (const auto* done = std::get_if<xcfg::Ret>(&step)) {
            if (preemptive) return xcfg::Yield{n.left, done->state};
            return red(n.left, done->state, mode);
          }
          return lift(
              step, [&](const StmtPtr& s1) { return Stmt::par_r(n.left, s1); },
              [&](const StmtPtr& s1) { return Stmt::par(n.left, s1); });
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          XCfg step = red(n.body, st, mode);
          if (std::holds_alternative<xcfg::Ret>(step)) return step;
          // A release inside an atomic block becomes an internal step.
          if (const auto* y = std::get_if<xcfg::Yield>(&step))
            return xcfg::Delay{Stmt::atomic(y->stmt), y->state};
          auto wrap = [](const StmtPtr& b) { return Stmt::atomic(b); };
          return lift(step, wrap, wrap);
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          if (sat(*n.guard, st)) return xcfg::Delay{Stmt::atomic(n.body), st};
          return xcfg::Delay{Stmt::seq(preemptive ? Stmt::skip() : Stmt::suspend(), s), st};
        } else {
          if (preemptive)
            throw std::invalid_argument("red: suspend is not a preemptive-mode statement");
          return xcfg::Yield{Stmt::skip(), st};
        }
      },
      s->node);
}

namespace {

Res mmred_cell(const StmtPtr& s, const State& st, SchedMode mode) {
  return Res::deferred([s, st, mode]() -> res::Node {
    return std::visit(
        [&](const auto& c) -> res::Node {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, xcfg::Ret>) {
            return res::Ret{c.state};
          } else if constexpr (std::is_same_v<T, xcfg::Delay>) {
            return res::Delay{mmred(c.stmt, c.state, mode)};
          } else if constexpr (std::is_same_v<T, xcfg::Plus>) {
            return res::Plus{mmred(c.left, c.left_state, mode), mmred(c.right, c.right_state, mode)};
          } else {
            return res::Yield{c.stmt, c.state};
          }
        },
        red(s, st, mode));
  });
}

GRes gmmred_cell(const StmtPtr& s, const State& st, SchedMode mode) {
  return GRes::deferred([s, st, mode]() -> gres::Node {
    return std::visit(
        [&](const auto& c) -> gres::Node {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, xcfg::Ret>) {
            return gres::Ret{c.state};
          } else if constexpr (std::is_same_v<T, xcfg::Delay>) {
            return gres::Delay{gmmred(c.stmt, c.state, mode)};
          } else if constexpr (std::is_same_v<T, xcfg::Plus>) {
            return gres::Plus{gmmred(c.left, c.left_state, mode),
                              gmmred(c.right, c.right_state, mode)};
          } else {
            StmtPtr residual = c.stmt;
            Continuation k(
                [residual, mode](const State& resumed) { return gmmred(residual, resumed, mode); },
                ContKey::make('G', static_cast<int>(mode), residual));
            return gres::Yield{std::move(k), c.state};
          }
        },
        red(s, st, mode));
  });
}

}  // namespace

Res mmred(const StmtPtr& s, const State& st, SchedMode mode) {
  return detail::shared_res('m', static_cast<int>(mode), s, st,
                            [&] { return mmred_cell(s, st, mode); });
}

GRes gmmred(const StmtPtr& s, const State& st, SchedMode mode) {
  return detail::shared_gres('g', static_cast<int>(mode), s, nullptr, st,
                             [&] { return gmmred_cell(s, st, mode); });
}

std::string render(const XCfg& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, xcfg::Ret>) {
          return "ret " + x.state.to_string();
        } else if constexpr (std::is_same_v<T, xcfg::Delay>) {
          return "δ(" + pretty(*x.stmt) + ", " + x.state.to_string() + ")";
        } else if constexpr (std::is_same_v<T, xcfg::Plus>) {
          return "(" + pretty(*x.left) + ", " + x.left_state.to_string() + ") + (" +
                 pretty(*x.right) + ", " + x.right_state.to_string() + ")";
        } else {
          return "yield ⟨" + pretty(*x.stmt) + "⟩ " + x.state.to_string();
        }
      },
      c);
}

}  // namespace cosem
