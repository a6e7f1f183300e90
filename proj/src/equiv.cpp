#include "cosem/equiv.hpp"

#include <unordered_map>

namespace cosem {

std::string render(const Path& path) {
  if (path.empty()) return "ε";
  std::string out;
  for (const auto& s : path) {
    switch (s.kind) {
      case PathStep::Kind::Delay: out += "δ"; break;
      case PathStep::Kind::PlusL: out += "+L "; break;
      case PathStep::Kind::PlusR: out += "+R "; break;
      case PathStep::Kind::Probe: out += "↦" + s.probe.to_string() + " "; break;
      case PathStep::Kind::Converge: out += "↓"; break;
    }
  }
  return out;
}

Verdict Verdict::holds(std::size_t depth) {
  Verdict v;
  v.depth = depth;
  return v;
}

Verdict Verdict::fails(Path path, std::string reason) {
  Verdict v;
  v.outcome = Outcome::Fails;
  v.path = std::move(path);
  v.reason = std::move(reason);
  return v;
}

Verdict Verdict::unknown(Budget budget, Path path) {
  Verdict v;
  v.outcome = Outcome::Unknown;
  v.budget = budget;
  v.path = std::move(path);
  return v;
}

std::string render(const Verdict& v) {
  switch (v.outcome) {
    case Verdict::Outcome::Holds:
      return "HOLDS(depth=" + std::to_string(v.depth) + ")";
    case Verdict::Outcome::Fails:
      return "FAILS(path=" + render(v.path) + ", reason=" + v.reason + ")";
    case Verdict::Outcome::Unknown:
      return std::string("UNKNOWN(budget=") +
             (v.budget == Verdict::Budget::Fuel ? "fuel" : "depth") + ", at=" + render(v.path) +
             ")";
  }
  return "";
}

namespace {

StmtPtr drop_skip_units(const StmtPtr& s) {
  return std::visit(
      [&](const auto& n) -> StmtPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Seq>) {
          StmtPtr second = drop_skip_units(n.second);
          if (n.first->template is<Stmt::Skip>()) return second;
          return Stmt::seq(drop_skip_units(n.first), second);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return Stmt::if_(n.guard, drop_skip_units(n.then_branch), drop_skip_units(n.else_branch));
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          return Stmt::while_(n.guard, drop_skip_units(n.body));
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          return Stmt::par(drop_skip_units(n.left), drop_skip_units(n.right));
        } else if constexpr (std::is_same_v<T, Stmt::ParL>) {
          return Stmt::par_l(drop_skip_units(n.left), drop_skip_units(n.right));
        } else if constexpr (std::is_same_v<T, Stmt::ParR>) {
          return Stmt::par_r(drop_skip_units(n.left), drop_skip_units(n.right));
        } else if constexpr (std::is_same_v<T, Stmt::Atomic>) {
          return Stmt::atomic(drop_skip_units(n.body));
        } else if constexpr (std::is_same_v<T, Stmt::Await>) {
          return Stmt::await(n.guard, drop_skip_units(n.body));
        } else {
          return s;
        }
      },
      s->node);
}

bool stmt_eq(const StmtEq& eq, const Stmt& a, const Stmt& b) {
  return eq ? eq(a, b) : equal(a, b);
}

const char* res_kind(const res::Node& n) {
  static const char* names[] = {"ret", "δ", "+", "yield"};
  return names[n.index()];
}

// Compares heads; returns a reason on mismatch. Delay/Plus heads match if
// both sides have them (children are compared by the caller).
std::optional<std::string> head_mismatch(const res::Node& x, const res::Node& y, const StmtEq& eq) {
  if (x.index() != y.index())
    return std::string(res_kind(x)) + " vs " + res_kind(y);
  if (const auto* rx = std::get_if<res::Ret>(&x)) {
    const auto& ry = std::get<res::Ret>(y);
    if (rx->state != ry.state)
      return "ret " + rx->state.to_string() + " vs ret " + ry.state.to_string();
  }
  if (const auto* yx = std::get_if<res::Yield>(&x)) {
    const auto& yy = std::get<res::Yield>(y);
    if (yx->state != yy.state)
      return "yield state " + yx->state.to_string() + " vs " + yy.state.to_string();
    if (!stmt_eq(eq, *yx->stmt, *yy.stmt))
      return "yield ⟨" + pretty(*yx->stmt) + "⟩ vs ⟨" + pretty(*yy.stmt) + "⟩";
  }
  return std::nullopt;
}

// Pairs of cells already shown related, with the depth they were checked to.
struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    return std::hash<const void*>()(p.first) * 31 + std::hash<const void*>()(p.second);
  }
};
using PairMemo = std::unordered_map<std::pair<const void*, const void*>, std::size_t, PairHash>;

bool known(PairMemo& memo, const void* a, const void* b, std::size_t depth) {
  auto it = memo.find({a, b});
  return it != memo.end() && it->second >= depth;
}

void remember(PairMemo& memo, const void* a, const void* b, std::size_t depth) {
  auto& d = memo[{a, b}];
  d = std::max(d, depth);
}

std::optional<Verdict> strong_rec(const Res& a, const Res& b, std::size_t depth, Path& path,
                                  const StmtEq& eq, PairMemo& memo) {
  if (depth == 0) return std::nullopt;
  if (known(memo, a.identity(), b.identity(), depth)) return std::nullopt;
  const res::Node& x = a.force();
  const res::Node& y = b.force();
  if (auto why = head_mismatch(x, y, eq)) return Verdict::fails(path, *why);
  std::optional<Verdict> out;
  if (const auto* dx = std::get_if<res::Delay>(&x)) {
    path.push_back({PathStep::Kind::Delay, {}});
    out = strong_rec(dx->next, std::get<res::Delay>(y).next, depth - 1, path, eq, memo);
    path.pop_back();
  } else if (const auto* px = std::get_if<res::Plus>(&x)) {
    const auto& py = std::get<res::Plus>(y);
    path.push_back({PathStep::Kind::PlusL, {}});
    out = strong_rec(px->left, py.left, depth - 1, path, eq, memo);
    path.pop_back();
    if (!out) {
      path.push_back({PathStep::Kind::PlusR, {}});
      out = strong_rec(px->right, py.right, depth - 1, path, eq, memo);
      path.pop_back();
    }
  }
  if (!out) remember(memo, a.identity(), b.identity(), depth);
  return out;
}

// Memo for giant-step checks: (key a, key b, probe) -> largest depth known
// to hold.
struct MemoKey {
  std::shared_ptr<const ContKey> a, b;
  State probe;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    return k.a->hash * 31 + k.b->hash * 17 + k.probe.hash();
  }
};

struct MemoEq {
  bool operator()(const MemoKey& x, const MemoKey& y) const {
    return x.probe == y.probe && equal(*x.a, *y.a) && equal(*x.b, *y.b);
  }
};

using Memo = std::unordered_map<MemoKey, std::size_t, MemoHash, MemoEq>;

const char* gres_kind(const gres::Node& n) {
  static const char* names[] = {"ret", "δ", "+", "yield"};
  return names[n.index()];
}

std::optional<Verdict> strong_g_rec(const GRes& a, const GRes& b, std::size_t depth, Path& path,
                                    const std::vector<State>& probes, Memo& memo,
                                    PairMemo& pairs, std::vector<GRes>& alive) {
  if (depth == 0) return std::nullopt;
  if (known(pairs, a.identity(), b.identity(), depth)) return std::nullopt;
  const gres::Node& x = a.force();
  const gres::Node& y = b.force();
  if (x.index() != y.index())
    return Verdict::fails(path, std::string(gres_kind(x)) + " vs " + gres_kind(y));
  std::optional<Verdict> out;
  if (const auto* rx = std::get_if<gres::Ret>(&x)) {
    const auto& ry = std::get<gres::Ret>(y);
    if (rx->state != ry.state)
      return Verdict::fails(path, "ret " + rx->state.to_string() + " vs ret " +
                                      ry.state.to_string());
  } else if (const auto* dx = std::get_if<gres::Delay>(&x)) {
    path.push_back({PathStep::Kind::Delay, {}});
    out = strong_g_rec(dx->next, std::get<gres::Delay>(y).next, depth - 1, path, probes, memo,
                       pairs, alive);
    path.pop_back();
  } else if (const auto* px = std::get_if<gres::Plus>(&x)) {
    const auto& py = std::get<gres::Plus>(y);
    path.push_back({PathStep::Kind::PlusL, {}});
    out = strong_g_rec(px->left, py.left, depth - 1, path, probes, memo, pairs, alive);
    path.pop_back();
    if (!out) {
      path.push_back({PathStep::Kind::PlusR, {}});
      out = strong_g_rec(px->right, py.right, depth - 1, path, probes, memo, pairs, alive);
      path.pop_back();
    }
  } else {
    const auto& yx = std::get<gres::Yield>(x);
    const auto& yy = std::get<gres::Yield>(y);
    if (yx.state != yy.state)
      return Verdict::fails(path, "yield state " + yx.state.to_string() + " vs " +
                                      yy.state.to_string());
    const auto& ka = yx.cont.key();
    const auto& kb = yy.cont.key();
    for (const auto& p : probes) {
      std::optional<MemoKey> mk;
      if (ka && kb) {
        mk = MemoKey{ka, kb, p};
        auto it = memo.find(*mk);
        if (it != memo.end() && it->second >= depth - 1) continue;
      }
      path.push_back({PathStep::Kind::Probe, p});
      out = strong_g_rec(yx.cont(p), yy.cont(p), depth - 1, path, probes, memo, pairs, alive);
      path.pop_back();
      if (out) break;
      if (mk) {
        auto& best = memo[*mk];
        best = std::max(best, depth - 1);
      }
    }
  }
  if (!out) {
    remember(pairs, a.identity(), b.identity(), depth);
    alive.push_back(a);  // keeps identities from being reused
    alive.push_back(b);
  }
  return out;
}

// Strips leading delays; nullopt when more than `fuel` are needed.
std::optional<Res> strip_delays(Res r, std::size_t fuel, std::size_t* used = nullptr) {
  std::size_t n = 0;
  while (const auto* d = std::get_if<res::Delay>(&r.force())) {
    if (n == fuel) return std::nullopt;
    ++n;
    r = d->next;
  }
  if (used) *used = n;
  return r;
}

std::optional<Res> converge_rec(const Res& r, std::size_t& fuel) {
  Res cur = r;
  while (true) {
    const res::Node& n = cur.force();
    if (const auto* d = std::get_if<res::Delay>(&n)) {
      if (fuel == 0) return std::nullopt;
      --fuel;
      cur = d->next;
      continue;
    }
    if (const auto* p = std::get_if<res::Plus>(&n)) {
      auto l = converge_rec(p->left, fuel);
      if (!l) return std::nullopt;
      auto rr = converge_rec(p->right, fuel);
      if (!rr) return std::nullopt;
      return res_plus(*l, *rr);
    }
    return cur;
  }
}

std::optional<Verdict> weak_rec(Res a, Res b, std::size_t depth, std::size_t fuel, Path& path,
                                const StmtEq& eq, PairMemo& memo) {
  if (depth == 0) return std::nullopt;
  if (known(memo, a.identity(), b.identity(), depth)) return std::nullopt;
  const void* ida = a.identity();
  const void* idb = b.identity();
  bool da = std::holds_alternative<res::Delay>(a.force());
  bool db = std::holds_alternative<res::Delay>(b.force());
  std::optional<Verdict> out;
  std::size_t pushed = 0;
  if (da && db) {
    path.push_back({PathStep::Kind::Delay, {}});
    out = weak_rec(std::get<res::Delay>(a.force()).next, std::get<res::Delay>(b.force()).next,
                   depth - 1, fuel, path, eq, memo);
    path.pop_back();
  } else {
    if (da || db) {
      auto sa = strip_delays(a, fuel);
      auto sb = strip_delays(b, fuel);
      if (!sa || !sb) return Verdict::unknown(Verdict::Budget::Fuel, path);
      a = *sa;
      b = *sb;
      path.push_back({PathStep::Kind::Converge, {}});
      ++pushed;
    }
    const res::Node& x = a.force();
    const res::Node& y = b.force();
    if (auto why = head_mismatch(x, y, eq)) {
      out = Verdict::fails(path, *why);
    } else if (const auto* px = std::get_if<res::Plus>(&x)) {
      const auto& py = std::get<res::Plus>(y);
      path.push_back({PathStep::Kind::PlusL, {}});
      out = weak_rec(px->left, py.left, depth - 1, fuel, path, eq, memo);
      path.pop_back();
      if (!out || !out->is_fails()) {
        std::optional<Verdict> left = out;
        path.push_back({PathStep::Kind::PlusR, {}});
        out = weak_rec(px->right, py.right, depth - 1, fuel, path, eq, memo);
        path.pop_back();
        if (!out || out->is_unknown()) out = left ? left : out;
      }
    }
    path.resize(path.size() - pushed);
  }
  if (!out) remember(memo, ida, idb, depth);
  return out;
}

}  // namespace

bool equal_modulo_skip_unit(const Stmt& a, const Stmt& b) {
  auto wrap = [](const Stmt& s) { return std::make_shared<const Stmt>(s); };
  return equal(*drop_skip_units(wrap(a)), *drop_skip_units(wrap(b)));
}

Verdict strong_bisim(const Res& a, const Res& b, std::size_t depth, const StmtEq& eq) {
  Path path;
  PairMemo memo;
  if (auto v = strong_rec(a, b, depth, path, eq, memo)) return *v;
  return Verdict::holds(depth);
}

Verdict strong_bisim_g(const GRes& a, const GRes& b, std::size_t depth,
                       const std::vector<State>& probes) {
  Path path;
  Memo memo;
  PairMemo pairs;
  std::vector<GRes> alive;
  if (auto v = strong_g_rec(a, b, depth, path, probes, memo, pairs, alive)) return *v;
  return Verdict::holds(depth);
}

Convergence converges(const Res& r, std::size_t fuel) {
  Convergence c;
  std::size_t left = fuel;
  if (auto n = converge_rec(r, left)) {
    c.converged = true;
    c.node = *n;
  }
  c.fuel_used = fuel - left;
  return c;
}

bool diverges(const Res& r, std::size_t fuel) {
  Res cur = r;
  for (std::size_t i = 0; i < fuel; ++i) {
    const auto* d = std::get_if<res::Delay>(&cur.force());
    if (!d) return false;
    cur = d->next;
  }
  return true;
}

Verdict weak_bisim(const Res& a, const Res& b, std::size_t depth, std::size_t fuel,
                   const StmtEq& eq) {
  Path path;
  PairMemo memo;
  if (auto v = weak_rec(a, b, depth, fuel, path, eq, memo)) return *v;
  return Verdict::holds(depth);
}

bool replay_mismatch(const Res& a, const Res& b, const Path& path, const StmtEq& eq,
                     std::size_t fuel) {
  Res x = a, y = b;
  for (const auto& step : path) {
    switch (step.kind) {
      case PathStep::Kind::Delay: {
        const auto* dx = std::get_if<res::Delay>(&x.force());
        const auto* dy = std::get_if<res::Delay>(&y.force());
        if (!dx || !dy) return false;
        x = dx->next;
        y = dy->next;
        break;
      }
      case PathStep::Kind::PlusL:
      case PathStep::Kind::PlusR: {
        const auto* px = std::get_if<res::Plus>(&x.force());
        const auto* py = std::get_if<res::Plus>(&y.force());
        if (!px || !py) return false;
        bool left = step.kind == PathStep::Kind::PlusL;
        x = left ? px->left : px->right;
        y = left ? py->left : py->right;
        break;
      }
      case PathStep::Kind::Converge: {
        auto sx = strip_delays(x, fuel);
        auto sy = strip_delays(y, fuel);
        if (!sx || !sy) return false;
        x = *sx;
        y = *sy;
        break;
      }
      case PathStep::Kind::Probe:
        return false;
    }
  }
  return head_mismatch(x.force(), y.force(), eq).has_value();
}

bool replay_mismatch_g(const GRes& a, const GRes& b, const Path& path) {
  GRes x = a, y = b;
  for (const auto& step : path) {
    const gres::Node& nx = x.force();
    const gres::Node& ny = y.force();
    if (nx.index() != ny.index()) return false;
    switch (step.kind) {
      case PathStep::Kind::Delay:
        if (!std::holds_alternative<gres::Delay>(nx)) return false;
        x = std::get<gres::Delay>(nx).next;
        y = std::get<gres::Delay>(ny).next;
        break;
      case PathStep::Kind::PlusL:
      case PathStep::Kind::PlusR: {
        if (!std::holds_alternative<gres::Plus>(nx)) return false;
        bool left = step.kind == PathStep::Kind::PlusL;
        const auto& px = std::get<gres::Plus>(nx);
        const auto& py = std::get<gres::Plus>(ny);
        x = left ? px.left : px.right;
        y = left ? py.left : py.right;
        break;
      }
      case PathStep::Kind::Probe:
        if (!std::holds_alternative<gres::Yield>(nx)) return false;
        x = std::get<gres::Yield>(nx).cont(step.probe);
        y = std::get<gres::Yield>(ny).cont(step.probe);
        break;
      case PathStep::Kind::Converge:
        return false;
    }
  }
  const gres::Node& nx = x.force();
  const gres::Node& ny = y.force();
  if (nx.index() != ny.index()) return true;
  if (const auto* r = std::get_if<gres::Ret>(&nx)) return r->state != std::get<gres::Ret>(ny).state;
  if (const auto* yx = std::get_if<gres::Yield>(&nx))
    return yx->state != std::get<gres::Yield>(ny).state;
  return false;
}

}  // namespace cosem
