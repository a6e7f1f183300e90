#include "cosem/giantstep.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>
#include <stdexcept>

namespace cosem {

namespace {

using KeyPtr = std::shared_ptr<const ContKey>;

int mode_tag(SchedMode m) { return m == SchedMode::Preemptive ? 0 : 1; }

KeyPtr key_or_null(char tag, SchedMode mode, StmtPtr stmt, const KeyPtr& a, const KeyPtr& b) {
  if ((!a && !b && !stmt) || (tag != 'E' && !a) || (tag == 'P' && !b)) return nullptr;
  return ContKey::make(tag, mode_tag(mode), std::move(stmt), a, b);
}

// λσ. evalseq_g(s, k σ)
Continuation seq_after(const StmtPtr& s, const Continuation& k, SchedMode mode) {
  return Continuation([s, k, mode](const State& st) { return evalseq_g(s, k(st), mode); },
                      key_or_null('S', mode, s, k.key(), nullptr));
}

// Parallel composition of two suspended threads:
// λσ. merge_r_g(right, left σ) + merge_l_g(left, right σ)
Continuation par_cont(const Continuation& left, const Continuation& right, SchedMode mode) {
  return Continuation(
      [left, right, mode](const State& st) {
        return gres_plus(merge_r_g(right, left(st), mode), merge_l_g(left, right(st), mode));
      },
      key_or_null('P', mode, nullptr, left.key(), right.key()));
}

gres::Node eval_g_node(const StmtPtr& s, const State& st, SchedMode mode) {
  return std::visit(
      [&](const auto& n) -> gres::Node {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return gres::Delay{gres_ret(st.with(n.var, eval_expr(*n.value, st)))};
        } else if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return gres::Ret{st};
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          return evalseq_g(n.second, eval_g(n.first, st, mode), mode).force();
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          const StmtPtr& branch = sat(*n.guard, st) ? n.then_branch : n.else_branch;
          if (mode == SchedMode::Preemptive)
            return gres::Delay{gres_yield(eval_g_cont(branch, mode), st)};
          return gres::Delay{eval_g(branch, st, mode)};
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (!sat(*n.guard, st)) return gres::Delay{gres_ret(st)};
          if (mode == SchedMode::Preemptive)
            return gres::Delay{gres_yield(seq_after(s, eval_g_cont(n.body, mode), mode), st)};
          return gres::Delay{evalseq_g(s, eval_g(n.body, st, mode), mode)};
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          return gres::Plus{merge_r_g(eval_g_cont(n.right, mode), eval_g(n.left, st, mode), mode),
                            merge_l_g(eval_g_cont(n.left, mode), eval_g(n.right, st, mode), mode)};
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          return close_g(eval_g(n.body, st, mode), mode).force();
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          if (sat(*n.guard, st)) return gres::Delay{close_g(eval_g(n.body, st, mode), mode)};
          return gres::Delay{gres_yield(eval_g_cont(s, mode), st)};
        } else {
          throw std::invalid_argument("eval_g: auxiliary statement form " + pretty(*s));
        }
      },
      s->node);
}

enum class Side { Right, Left };

// merge_r_g (pending = right thread) and merge_l_g (pending = left thread).
GRes merge(Side side, Continuation k, GRes r, SchedMode mode);

GRes merge_cell(Side side, Continuation k, GRes r, SchedMode mode) {
  return GRes::deferred([side, k = std::move(k), r = std::move(r), mode]() -> gres::Node {
    return std::visit(
        [&](const auto& n) -> gres::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, gres::Ret>) {
            if (mode == SchedMode::Preemptive) return gres::Yield{k, n.state};
            return k(n.state).force();
          } else if constexpr (std::is_same_v<T, gres::Delay>) {
            return gres::Delay{merge(side, k, n.next, mode)};
          } else if constexpr (std::is_same_v<T, gres::Plus>) {
            return gres::Plus{merge(side, k, n.left, mode), merge(side, k, n.right, mode)};
          } else {
            // The running thread released control; both threads are now
            // suspended and either may go first when control returns.
            if (side == Side::Right) return gres::Yield{par_cont(n.cont, k, mode), n.state};
            return gres::Yield{par_cont(k, n.cont, mode), n.state};
          }
        },
        r.force());
  });
}

GRes merge(Side side, Continuation k, GRes r, SchedMode mode) {
  if (!k.key()) return merge_cell(side, std::move(k), std::move(r), mode);
  return detail::shared_gres_over(side == Side::Right ? 'R' : 'L', mode_tag(mode), nullptr,
                                  k.key(), r, [&] { return merge_cell(side, k, r, mode); });
}

GRes evalseq_cell(const StmtPtr& s, const GRes& r, SchedMode mode);
GRes close_cell(const GRes& r, SchedMode mode);

}  // namespace

GRes eval_g(const StmtPtr& s, const State& st, SchedMode mode) {
  return detail::shared_gres('E', mode_tag(mode), s, nullptr, st, [&] {
    return GRes::deferred([s, st, mode] { return eval_g_node(s, st, mode); });
  });
}

Continuation eval_g_cont(const StmtPtr& s, SchedMode mode) {
  return Continuation([s, mode](const State& st) { return eval_g(s, st, mode); },
                      key_or_null('E', mode, s, nullptr, nullptr));
}

GRes evalseq_g(const StmtPtr& s, const GRes& r, SchedMode mode) {
  return detail::shared_gres_over('Q', mode_tag(mode), s, nullptr, r,
                                  [&] { return evalseq_cell(s, r, mode); });
}

GRes close_g(const GRes& r, SchedMode mode) {
  return detail::shared_gres_over('K', mode_tag(mode), nullptr, nullptr, r,
                                  [&] { return close_cell(r, mode); });
}

namespace {

GRes evalseq_cell(const StmtPtr& s, const GRes& r, SchedMode mode) {
  return GRes::deferred([s, r, mode]() -> gres::Node {
    return std::visit(
        [&](const auto& n) -> gres::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, gres::Ret>) {
            if (mode == SchedMode::Preemptive) return gres::Yield{eval_g_cont(s, mode), n.state};
            return eval_g(s, n.state, mode).force();
          } else if constexpr (std::is_same_v<T, gres::Delay>) {
            return gres::Delay{evalseq_g(s, n.next, mode)};
          } else if constexpr (std::is_same_v<T, gres::Plus>) {
            return gres::Plus{evalseq_g(s, n.left, mode), evalseq_g(s, n.right, mode)};
          } else {
            return gres::Yield{seq_after(s, n.cont, mode), n.state};
          }
        },
        r.force());
  });
}

}  // namespace

GRes merge_r_g(const Continuation& k, const GRes& r, SchedMode mode) {
  return merge(Side::Right, k, r, mode);
}

GRes merge_l_g(const Continuation& k, const GRes& r, SchedMode mode) {
  return merge(Side::Left, k, r, mode);
}

namespace {

GRes close_cell(const GRes& r, SchedMode mode) {
  return GRes::deferred([r, mode]() -> gres::Node {
    return std::visit(
        [&](const auto& n) -> gres::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, gres::Ret>) {
            return n;
          } else if constexpr (std::is_same_v<T, gres::Delay>) {
            return gres::Delay{close_g(n.next, mode)};
          } else if constexpr (std::is_same_v<T, gres::Plus>) {
            return gres::Plus{close_g(n.left, mode), close_g(n.right, mode)};
          } else {
            return gres::Delay{detail::shared_gres('C', mode_tag(mode), nullptr, n.cont.key(), n.state,
                                                   [&] { return close_g(n.cont(n.state), mode); })};
          }
        },
        r.force());
  });
}

}  // namespace

namespace {

// Shared giant-step cells map to shared big-step cells. Entries keep the
// source cell alive so its address is not reused.
struct FlattenMemo {
  std::mutex m;
  std::unordered_map<const void*, std::pair<GRes, Res::Weak>> done;
};

Res flatten_shared(const GRes& r, const std::shared_ptr<FlattenMemo>& memo) {
  {
    std::lock_guard<std::mutex> lock(memo->m);
    auto it = memo->done.find(r.identity());
    if (it != memo->done.end())
      if (auto hit = it->second.second.lock()) return *hit;
  }
  Res out = Res::deferred([r, memo]() -> res::Node {
    return std::visit(
        [&](const auto& n) -> res::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, gres::Ret>) {
            return res::Ret{n.state};
          } else if constexpr (std::is_same_v<T, gres::Delay>) {
            return res::Delay{flatten_shared(n.next, memo)};
          } else if constexpr (std::is_same_v<T, gres::Plus>) {
            return res::Plus{flatten_shared(n.left, memo), flatten_shared(n.right, memo)};
          } else {
            throw std::logic_error("flatten: giant-step resumption yields at " +
                                   n.state.to_string());
          }
        },
        r.force());
  });
  std::lock_guard<std::mutex> lock(memo->m);
  memo->done.insert_or_assign(r.identity(), std::make_pair(r, Res::Weak(out)));
  return out;
}

}  // namespace

Res flatten(const GRes& r) { return flatten_shared(r, std::make_shared<FlattenMemo>()); }

std::vector<State> default_probes(const std::set<std::string>& vars, const State& initial,
                                  std::size_t cap) {
  std::vector<State> out;
  std::vector<std::string> names(vars.begin(), vars.end());
  std::size_t total = 1;
  for (std::size_t i = 0; i < names.size() && total < cap; ++i) total *= 4;
  for (std::size_t idx = 0; idx < std::min(total, cap); ++idx) {
    // Base-4 digits of idx, last variable fastest.
    State::Map m;
    std::size_t rest = idx;
    for (std::size_t i = names.size(); i > 0; --i) {
      m[names[i - 1]] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    out.emplace_back(std::move(m));
  }
  if (std::find(out.begin(), out.end(), initial) == out.end()) out.push_back(initial);
  return out;
}

}  // namespace cosem
