#include "cosem/tracesem.hpp"

#include <functional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cosem {

Schedule::Schedule() : cur_(std::make_shared<Cursor>()) {}

Schedule::Schedule(std::vector<Choice> choices, bool cyclic)
    : cur_(std::make_shared<Cursor>(Cursor{std::move(choices), cyclic, 0})) {}

Schedule Schedule::parse(std::string_view text) {
  std::vector<Choice> choices;
  bool cyclic = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == 'L' || c == 'l') {
      choices.push_back(Choice::L);
    } else if (c == 'R' || c == 'r') {
      choices.push_back(Choice::R);
    } else if (c == '*' && i + 1 == text.size() && !choices.empty()) {
      cyclic = true;
    } else if (c != ' ' && c != ',') {
      throw std::invalid_argument("bad schedule literal: " + std::string(text));
    }
  }
  return Schedule(std::move(choices), cyclic);
}

Choice Schedule::next() const {
  Cursor& c = *cur_;
  std::size_t i = c.pos++;
  if (i < c.choices.size()) return c.choices[i];
  if (c.cyclic) return c.choices[i % c.choices.size()];
  return Choice::L;
}

std::size_t Schedule::consumed() const { return cur_->pos; }

std::string Schedule::to_string() const {
  std::string out;
  for (Choice c : cur_->choices) out += c == Choice::L ? 'L' : 'R';
  if (cur_->cyclic) out += '*';
  return out;
}

ResumeOracle::ResumeOracle() : cur_(std::make_shared<Cursor>()) {}

ResumeOracle::ResumeOracle(std::vector<State> states)
    : cur_(std::make_shared<Cursor>(Cursor{std::move(states), 0})) {}

ResumeOracle ResumeOracle::parse(std::string_view text) {
  std::vector<State> states;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(start, end - start);
    if (part.find_first_not_of(" \t\n") != std::string_view::npos)
      states.push_back(parse_state(part));
    start = end + 1;
  }
  return ResumeOracle(std::move(states));
}

State ResumeOracle::next(const State& released) const {
  Cursor& c = *cur_;
  if (c.pos < c.states.size()) return c.states[c.pos++];
  return released;
}

// ---------------------------------------------------------------------------
// Big-step traces

namespace {

Trace tret(State st) { return Trace::ready(trace::Ret{std::move(st)}); }
Trace tyield(StmtPtr s, State st) { return Trace::ready(trace::Yield{std::move(s), std::move(st)}); }

enum class Ext { Seq, ParR, ParL };

Trace textend(Ext ext, StmtPtr s, Trace t, Schedule sched, SchedMode mode) {
  return Trace::deferred([=]() -> trace::Node {
    return std::visit(
        [&](const auto& n) -> trace::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, trace::Ret>) {
            if (mode == SchedMode::Preemptive) return trace::Yield{s, n.state};
            return trace_eval(s, n.state, sched, mode).force();
          } else if constexpr (std::is_same_v<T, trace::Delay>) {
            return trace::Delay{textend(ext, s, n.next, sched, mode)};
          } else {
            StmtPtr r = ext == Ext::Seq    ? Stmt::seq(n.stmt, s)
                        : ext == Ext::ParR ? Stmt::par(n.stmt, s)
                                           : Stmt::par(s, n.stmt);
            return trace::Yield{r, n.state};
          }
        },
        t.force());
  });
}

trace::Node trace_node(const StmtPtr& s, const State& st, const Schedule& sched, SchedMode mode) {
  const bool preemptive = mode == SchedMode::Preemptive;
  return std::visit(
      [&](const auto& n) -> trace::Node {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return trace::Delay{tret(st.with(n.var, eval_expr(*n.value, st)))};
        } else if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return trace::Ret{st};
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          return textend(Ext::Seq, n.second, trace_eval(n.first, st, sched, mode), sched, mode)
              .force();
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          const StmtPtr& branch = sat(*n.guard, st) ? n.then_branch : n.else_branch;
          if (preemptive) return trace::Delay{tyield(branch, st)};
          return trace::Delay{trace_eval(branch, st, sched, mode)};
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (!sat(*n.guard, st)) return trace::Delay{tret(st)};
          if (preemptive) return trace::Delay{tyield(Stmt::seq(n.body, s), st)};
          return trace::Delay{
              textend(Ext::Seq, s, trace_eval(n.body, st, sched, mode), sched, mode)};
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          if (sched.next() == Choice::L)
            return textend(Ext::ParR, n.right, trace_eval(n.left, st, sched, mode), sched, mode)
                .force();
          return textend(Ext::ParL, n.left, trace_eval(n.right, st, sched, mode), sched, mode)
              .force();
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          return close_trace(trace_eval(n.body, st, sched, mode), sched, mode).force();
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          if (sat(*n.guard, st))
            return trace::Delay{close_trace(trace_eval(n.body, st, sched, mode), sched, mode)};
          return trace::Delay{tyield(s, st)};
        } else {
          throw std::invalid_argument("trace_eval: auxiliary statement form " + pretty(*s));
        }
      },
      s->node);
}

}  // namespace

Trace trace_eval(const StmtPtr& s, const State& st, const Schedule& sched, SchedMode mode) {
  return Trace::deferred([=] { return trace_node(s, st, sched, mode); });
}

Trace close_trace(const Trace& t, const Schedule& sched, SchedMode mode) {
  return Trace::deferred([=]() -> trace::Node {
    return std::visit(
        [&](const auto& n) -> trace::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, trace::Ret>) {
            return n;
          } else if constexpr (std::is_same_v<T, trace::Delay>) {
            return trace::Delay{close_trace(n.next, sched, mode)};
          } else {
            return trace::Delay{close_trace(trace_eval(n.stmt, n.state, sched, mode), sched, mode)};
          }
        },
        t.force());
  });
}

// ---------------------------------------------------------------------------
// Giant-step traces. Evaluation first builds a linear giant-step
// resumption (no +, yields carry continuations); the resume oracle then
// picks the state each continuation is applied to.

namespace {

namespace lg {
struct Ret;
struct Delay;
struct Yield;
using Node = std::variant<Ret, Delay, Yield>;
}  // namespace lg

using LRes = Codata<lg::Node>;
using LCont = std::function<LRes(const State&)>;

namespace lg {
struct Ret { State state; };
struct Delay { LRes next; };
struct Yield { LCont cont; State state; };
}  // namespace lg

LRes leval(const StmtPtr& s, const State& st, const Schedule& sched, SchedMode mode);

LCont leval_cont(const StmtPtr& s, const Schedule& sched, SchedMode mode) {
  return [=](const State& st) { return leval(s, st, sched, mode); };
}

LRes lready(lg::Node n) { return LRes::ready(std::move(n)); }

LRes lseq(StmtPtr s, LRes r, Schedule sched, SchedMode mode) {
  return LRes::deferred([=]() -> lg::Node {
    return std::visit(
        [&](const auto& n) -> lg::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, lg::Ret>) {
            if (mode == SchedMode::Preemptive) return lg::Yield{leval_cont(s, sched, mode), n.state};
            return leval(s, n.state, sched, mode).force();
          } else if constexpr (std::is_same_v<T, lg::Delay>) {
            return lg::Delay{lseq(s, n.next, sched, mode)};
          } else {
            LCont k = n.cont;
            return lg::Yield{[=](const State& st) { return lseq(s, k(st), sched, mode); }, n.state};
          }
        },
        r.force());
  });
}

enum class Side { Right, Left };

LRes lmerge(Side side, LCont k, LRes r, Schedule sched, SchedMode mode);

// Both threads suspended; the schedule picks who runs first on resumption.
LCont lpar(LCont left, LCont right, Schedule sched, SchedMode mode) {
  return [=](const State& st) {
    return LRes::deferred([=]() -> lg::Node {
      if (sched.next() == Choice::L) return lmerge(Side::Right, right, left(st), sched, mode).force();
      return lmerge(Side::Left, left, right(st), sched, mode).force();
    });
  };
}

LRes lmerge(Side side, LCont k, LRes r, Schedule sched, SchedMode mode) {
  return LRes::deferred([=]() -> lg::Node {
    return std::visit(
        [&](const auto& n) -> lg::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, lg::Ret>) {
            if (mode == SchedMode::Preemptive) return lg::Yield{k, n.state};
            return k(n.state).force();
          } else if constexpr (std::is_same_v<T, lg::Delay>) {
            return lg::Delay{lmerge(side, k, n.next, sched, mode)};
          } else {
            if (side == Side::Right) return lg::Yield{lpar(n.cont, k, sched, mode), n.state};
            return lg::Yield{lpar(k, n.cont, sched, mode), n.state};
          }
        },
        r.force());
  });
}

LRes lclose(LRes r) {
  return LRes::deferred([=]() -> lg::Node {
    return std::visit(
        [&](const auto& n) -> lg::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, lg::Ret>) {
            return n;
          } else if constexpr (std::is_same_v<T, lg::Delay>) {
            return lg::Delay{lclose(n.next)};
          } else {
            return lg::Delay{lclose(n.cont(n.state))};
          }
        },
        r.force());
  });
}

lg::Node leval_node(const StmtPtr& s, const State& st, const Schedule& sched, SchedMode mode) {
  const bool preemptive = mode == SchedMode::Preemptive;
  return std::visit(
      [&](const auto& n) -> lg::Node {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Assign>) {
          return lg::Delay{lready(lg::Ret{st.with(n.var, eval_expr(*n.value, st))})};
        } else if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return lg::Ret{st};
        } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
          return lseq(n.second, leval(n.first, st, sched, mode), sched, mode).force();
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          const StmtPtr& branch = sat(*n.guard, st) ? n.then_branch : n.else_branch;
          if (preemptive) return lg::Delay{lready(lg::Yield{leval_cont(branch, sched, mode), st})};
          return lg::Delay{leval(branch, st, sched, mode)};
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (!sat(*n.guard, st)) return lg::Delay{lready(lg::Ret{st})};
          if (preemptive) {
            StmtPtr body = n.body;
            LCont k = [=](const State& st2) {
              return lseq(s, leval(body, st2, sched, mode), sched, mode);
            };
            return lg::Delay{lready(lg::Yield{k, st})};
          }
          return lg::Delay{lseq(s, leval(n.body, st, sched, mode), sched, mode)};
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          if (sched.next() == Choice::L)
            return lmerge(Side::Right, leval_cont(n.right, sched, mode),
                          leval(n.left, st, sched, mode), sched, mode)
                .force();
          return lmerge(Side::Left, leval_cont(n.left, sched, mode),
                        leval(n.right, st, sched, mode), sched, mode)
              .force();
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          return lclose(leval(n.body, st, sched, mode)).force();
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          if (sat(*n.guard, st)) return lg::Delay{lclose(leval(n.body, st, sched, mode))};
          return lg::Delay{lready(lg::Yield{leval_cont(s, sched, mode), st})};
        } else {
          throw std::invalid_argument("trace_eval_g: auxiliary statement form " + pretty(*s));
        }
      },
      s->node);
}

LRes leval(const StmtPtr& s, const State& st, const Schedule& sched, SchedMode mode) {
  return LRes::deferred([=] { return leval_node(s, st, sched, mode); });
}

GTrace resolve(LRes r, ResumeOracle resume) {
  return GTrace::deferred([=]() -> gtrace::Node {
    return std::visit(
        [&](const auto& n) -> gtrace::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, lg::Ret>) {
            return gtrace::Ret{n.state};
          } else if constexpr (std::is_same_v<T, lg::Delay>) {
            return gtrace::Delay{resolve(n.next, resume)};
          } else {
            State back = resume.next(n.state);
            return gtrace::Yield{back, resolve(n.cont(back), resume), n.state};
          }
        },
        r.force());
  });
}

}  // namespace

GTrace trace_eval_g(const StmtPtr& s, const State& st, const Schedule& sched,
                    const ResumeOracle& resume, SchedMode mode) {
  return resolve(leval(s, st, sched, mode), resume);
}

GTrace close_trace_g(const GTrace& t) {
  return GTrace::deferred([=]() -> gtrace::Node {
    return std::visit(
        [&](const auto& n) -> gtrace::Node {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, gtrace::Ret> || std::is_same_v<T, gtrace::Stuck>) {
            return n;
          } else if constexpr (std::is_same_v<T, gtrace::Delay>) {
            return gtrace::Delay{close_trace_g(n.next)};
          } else {
            if (n.resumed != n.state)
              return gtrace::Stuck{"released in " + n.state.to_string() + " but regained in " +
                                   n.resumed.to_string()};
            return gtrace::Delay{close_trace_g(n.next)};
          }
        },
        t.force());
  });
}

// ---------------------------------------------------------------------------
// Projection checks

namespace {

using FailMemo = std::set<std::tuple<const void*, const void*, std::size_t>>;

bool path_rec(const Trace& t, const Res& r, std::size_t depth, FailMemo& failed) {
  if (depth == 0) return true;
  auto key = std::make_tuple(t.identity(), r.identity(), depth);
  if (failed.count(key)) return false;
  bool ok = std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, res::Plus>) {
          return path_rec(t, n.left, depth - 1, failed) || path_rec(t, n.right, depth - 1, failed);
        } else {
          const trace::Node& m = t.force();
          if constexpr (std::is_same_v<T, res::Ret>) {
            const auto* x = std::get_if<trace::Ret>(&m);
            return x && x->state == n.state;
          } else if constexpr (std::is_same_v<T, res::Delay>) {
            const auto* x = std::get_if<trace::Delay>(&m);
            return x && path_rec(x->next, n.next, depth - 1, failed);
          } else {
            const auto* x = std::get_if<trace::Yield>(&m);
            return x && x->state == n.state && equal(*x->stmt, *n.stmt);
          }
        }
      },
      r.force());
  if (!ok) failed.insert(key);
  return ok;
}

bool gpath_rec(const GTrace& t, const GRes& r, std::size_t depth, FailMemo& failed,
               std::vector<GRes>& alive) {
  if (depth == 0) return true;
  auto key = std::make_tuple(t.identity(), r.identity(), depth);
  if (failed.count(key)) return false;
  bool ok = std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, gres::Plus>) {
          return gpath_rec(t, n.left, depth - 1, failed, alive) ||
                 gpath_rec(t, n.right, depth - 1, failed, alive);
        } else {
          const gtrace::Node& m = t.force();
          if constexpr (std::is_same_v<T, gres::Ret>) {
            const auto* x = std::get_if<gtrace::Ret>(&m);
            return x && x->state == n.state;
          } else if constexpr (std::is_same_v<T, gres::Delay>) {
            const auto* x = std::get_if<gtrace::Delay>(&m);
            return x && gpath_rec(x->next, n.next, depth - 1, failed, alive);
          } else {
            const auto* x = std::get_if<gtrace::Yield>(&m);
            return x && x->state == n.state &&
                   gpath_rec(x->next, n.cont(x->resumed), depth - 1, failed, alive);
          }
        }
      },
      r.force());
  if (!ok) {
    failed.insert(key);
    alive.push_back(r);
  }
  return ok;
}

void plus_paths_rec(const Res& r, std::size_t depth, std::vector<Choice>& cur,
                    std::vector<std::vector<Choice>>& out) {
  if (depth == 0) {
    out.push_back(cur);
    return;
  }
  const res::Node& n = r.force();
  if (const auto* d = std::get_if<res::Delay>(&n)) {
    plus_paths_rec(d->next, depth - 1, cur, out);
  } else if (const auto* p = std::get_if<res::Plus>(&n)) {
    cur.push_back(Choice::L);
    plus_paths_rec(p->left, depth - 1, cur, out);
    cur.back() = Choice::R;
    plus_paths_rec(p->right, depth - 1, cur, out);
    cur.pop_back();
  } else {
    out.push_back(cur);
  }
}

}  // namespace

bool is_path_of(const Trace& t, const Res& r, std::size_t depth) {
  FailMemo failed;
  return path_rec(t, r, depth, failed);
}

bool is_path_of_g(const GTrace& t, const GRes& r, std::size_t depth) {
  FailMemo failed;
  std::vector<GRes> alive;
  return gpath_rec(t, r, depth, failed, alive);
}

bool follows(const Trace& t, const Res& r, const std::vector<Choice>& choices,
             std::size_t depth) {
  Trace tc = t;
  Res rc = r;
  std::size_t next = 0;
  for (; depth > 0; --depth) {
    const res::Node& n = rc.force();
    if (const auto* p = std::get_if<res::Plus>(&n)) {
      Choice c = next < choices.size() ? choices[next] : Choice::L;
      ++next;
      rc = c == Choice::L ? p->left : p->right;
      continue;
    }
    const trace::Node& m = tc.force();
    if (const auto* d = std::get_if<res::Delay>(&n)) {
      const auto* x = std::get_if<trace::Delay>(&m);
      if (!x) return false;
      tc = x->next;
      rc = d->next;
    } else if (const auto* ret = std::get_if<res::Ret>(&n)) {
      const auto* x = std::get_if<trace::Ret>(&m);
      return x && x->state == ret->state;
    } else {
      const auto& y = std::get<res::Yield>(n);
      const auto* x = std::get_if<trace::Yield>(&m);
      return x && x->state == y.state && equal(*x->stmt, *y.stmt);
    }
  }
  return true;
}

std::vector<std::vector<Choice>> plus_paths(const Res& r, std::size_t depth) {
  std::vector<std::vector<Choice>> out;
  std::vector<Choice> cur;
  plus_paths_rec(r, depth, cur, out);
  return out;
}

FiniteTree prefix(const Trace& t, std::size_t depth) {
  FiniteTree out;
  FiniteTree* cur = &out;
  Trace tc = t;
  for (; depth > 0; --depth) {
    const trace::Node& n = tc.force();
    if (const auto* d = std::get_if<trace::Delay>(&n)) {
      cur->kind = FiniteTree::Kind::Delay;
      cur->children.emplace_back();
      cur = &cur->children.back();
      tc = d->next;
    } else if (const auto* r = std::get_if<trace::Ret>(&n)) {
      cur->kind = FiniteTree::Kind::Ret;
      cur->state = r->state;
      break;
    } else {
      const auto& y = std::get<trace::Yield>(n);
      cur->kind = FiniteTree::Kind::Yield;
      cur->stmt = y.stmt;
      cur->state = y.state;
      break;
    }
  }
  return out;
}

FiniteTree prefix(const GTrace& t, std::size_t depth) {
  FiniteTree out;
  if (depth == 0) return out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, gtrace::Ret>) {
          out.kind = FiniteTree::Kind::Ret;
          out.state = n.state;
        } else if constexpr (std::is_same_v<T, gtrace::Delay>) {
          out.kind = FiniteTree::Kind::Delay;
          out.children.push_back(prefix(n.next, depth - 1));
        } else if constexpr (std::is_same_v<T, gtrace::Yield>) {
          out.kind = FiniteTree::Kind::Yield;
          out.state = n.state;
          out.probes = {n.resumed};
          out.children.push_back(prefix(n.next, depth - 1));
        } else {
          out.kind = FiniteTree::Kind::Stuck;
          out.note = n.note;
        }
      },
      t.force());
  return out;
}

}  // namespace cosem
