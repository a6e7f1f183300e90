#include "cosem/bigstep.hpp"

#include <stdexcept>

namespace cosem {

namespace {

// Statement for the par/seq extensions of a yielded residual.
enum class Ext { Seq, ParR, ParL };

StmtPtr extend(Ext ext, const StmtPtr& residual, const StmtPtr& s) {
  switch (ext) {
    case Ext::Seq: return Stmt::seq(residual, s);
    case Ext::ParR: return Stmt::par(residual, s);
    case Ext::ParL: return Stmt::par(s, residual);
  }
  return residual;
}

// The three extensions share their δ/+ rules and differ only in how a
// yielded residual is wrapped.
Res extension(Ext ext, StmtPtr s, Res r, SchedMode mode);

Res extension_cell(Ext ext, StmtPtr s, Res r, SchedMode mode) {
  return Res::deferred([ext, s = std::move(s), r = std::move(r), mode]() -> res::Node {
    return std::visit(
        [&](const auto& n) -> res::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, res::Ret>) {
            if (mode == SchedMode::Preemptive) return res::Yield{s, n.state};
            return eval(s, n.state, mode).force();
          } else if constexpr (std::is_same_v<T, res::Delay>) {
            return res::Delay{extension(ext, s, n.next, mode)};
          } else if constexpr (std::is_same_v<T, res::Plus>) {
            return res::Plus{extension(ext, s, n.left, mode), extension(ext, s, n.right, mode)};
          } else {
            return res::Yield{extend(ext, n.stmt, s), n.state};
          }
        },
        r.force());
  });
}

Res extension(Ext ext, StmtPtr s, Res r, SchedMode mode) {
  static const char tags[] = {'q', 'r', 'l'};
  return detail::shared_res_over(tags[static_cast<int>(ext)], static_cast<int>(mode), s, r,
                                 [&] { return extension_cell(ext, s, r, mode); });
}

res::Node eval_node(const StmtPtr& s, const State& st, SchedMode mode) {
  return std::visit(
      [&](const auto& n) -> res::Node {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return res::Delay{res_ret(st.with(n.var, eval_expr(*n.value, st)))};
        } else if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return res::Ret{st};
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          return evalseq(n.second, eval(n.first, st, mode), mode).force();
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          const StmtPtr& branch = sat(*n.guard, st) ? n.then_branch : n.else_branch;
          if (mode == SchedMode::Preemptive) return res::Delay{res_yield(branch, st)};
          return res::Delay{eval(branch, st, mode)};
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (!sat(*n.guard, st)) return res::Delay{res_ret(st)};
          if (mode == SchedMode::Preemptive)
            return res::Delay{res_yield(Stmt::seq(n.body, s), st)};
          return res::Delay{evalseq(s, eval(n.body, st, mode), mode)};
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          return res::Plus{evalpar_r(n.right, eval(n.left, st, mode), mode),
                           evalpar_l(n.left, eval(n.right, st, mode), mode)};
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          return close(eval(n.body, st, mode), mode).force();
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          if (sat(*n.guard, st)) return res::Delay{close(eval(n.body, st, mode), mode)};
          return res::Delay{res_yield(s, st)};
        } else {
          throw std::invalid_argument("eval: auxiliary statement form " + pretty(*s));
        }
      },
      s->node);
}

}  // namespace

Res eval(const StmtPtr& s, const State& st, SchedMode mode) {
  return detail::shared_res('e', static_cast<int>(mode), s, st, [&] {
    return Res::deferred([s, st, mode] { return eval_node(s, st, mode); });
  });
}

Res evalseq(const StmtPtr& s, const Res& r, SchedMode mode) {
  return extension(Ext::Seq, s, r, mode);
}

Res evalpar_r(const StmtPtr& s, const Res& r, SchedMode mode) {
  return extension(Ext::ParR, s, r, mode);
}

Res evalpar_l(const StmtPtr& s, const Res& r, SchedMode mode) {
  return extension(Ext::ParL, s, r, mode);
}

namespace {

Res close_cell(const Res& r, SchedMode mode) {
  return Res::deferred([r, mode]() -> res::Node {
    return std::visit(
        [&](const auto& n) -> res::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, res::Ret>) {
            return n;
          } else if constexpr (std::is_same_v<T, res::Delay>) {
            return res::Delay{close(n.next, mode)};
          } else if constexpr (std::is_same_v<T, res::Plus>) {
            return res::Plus{close(n.left, mode), close(n.right, mode)};
          } else {
            return res::Delay{detail::shared_res('c', static_cast<int>(mode), n.stmt, n.state,
                                                 [&] { return close(eval(n.stmt, n.state, mode), mode); })};
          }
        },
        r.force());
  });
}

}  // namespace

Res close(const Res& r, SchedMode mode) {
  return detail::shared_res_over('k', static_cast<int>(mode), nullptr, r,
                                 [&] { return close_cell(r, mode); });
}

bool is_await_residual(const Stmt& s) {
  if (s.is<Stmt::Await>()) return true;
  if (const auto* q = s.as<Stmt::Seq>()) {
    if (q->first->is<Stmt::Skip>() || q->first->is<Stmt::Suspend>())
      return is_await_residual(*q->second);
    return is_await_residual(*q->first);
  }
  if (const auto* p = s.as<Stmt::Par>()) return is_await_residual(*p->left) || is_await_residual(*p->right);
  return false;
}

}  // namespace cosem
