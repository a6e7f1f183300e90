#include "cosem/resumption.hpp"

#include <unordered_map>

namespace cosem {

std::shared_ptr<const ContKey> ContKey::make(char tag, int mode, StmtPtr stmt,
                                             std::shared_ptr<const ContKey> a,
                                             std::shared_ptr<const ContKey> b) {
  std::size_t h = static_cast<std::size_t>(tag) * 1000003u + static_cast<std::size_t>(mode);
  auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  if (stmt) mix(stmt->hash);
  if (a) mix(a->hash);
  if (b) mix(b->hash);
  return std::make_shared<const ContKey>(
      ContKey{tag, std::move(stmt), std::move(a), std::move(b), mode, h});
}

bool equal(const ContKey& a, const ContKey& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.tag != b.tag || a.mode != b.mode) return false;
  if (static_cast<bool>(a.stmt) != static_cast<bool>(b.stmt)) return false;
  if (a.stmt && !equal(*a.stmt, *b.stmt)) return false;
  auto same = [](const std::shared_ptr<const ContKey>& x, const std::shared_ptr<const ContKey>& y) {
    if (!x || !y) return !x && !y;
    return equal(*x, *y);
  };
  return same(a.a, b.a) && same(a.b, b.b);
}

Res res_ret(State st) { return Res::ready(res::Ret{std::move(st)}); }
Res res_delay(Res next) { return Res::ready(res::Delay{std::move(next)}); }
Res res_plus(Res left, Res right) { return Res::ready(res::Plus{std::move(left), std::move(right)}); }
Res res_yield(StmtPtr stmt, State st) { return Res::ready(res::Yield{std::move(stmt), std::move(st)}); }

GRes gres_ret(State st) { return GRes::ready(gres::Ret{std::move(st)}); }
GRes gres_delay(GRes next) { return GRes::ready(gres::Delay{std::move(next)}); }
GRes gres_plus(GRes left, GRes right) {
  return GRes::ready(gres::Plus{std::move(left), std::move(right)});
}
GRes gres_yield(Continuation k, State st) {
  return GRes::ready(gres::Yield{std::move(k), std::move(st)});
}

Res delta_inf() {
  static const Res inf = Res::knot([](const Res& self) { return res::Node{res::Delay{self}}; });
  return inf;
}

GRes gdelta_inf() {
  static const GRes inf =
      GRes::knot([](const GRes& self) { return gres::Node{gres::Delay{self}}; });
  return inf;
}

Res delays(std::size_t n, Res r) {
  for (std::size_t i = 0; i < n; ++i) r = res_delay(std::move(r));
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct ShareKey {
  char tag;
  int mode;
  StmtPtr stmt;
  std::shared_ptr<const ContKey> cont;
  State state;
  const void* src = nullptr;
};

struct ShareHash {
  std::size_t operator()(const ShareKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.tag) * 31 + static_cast<std::size_t>(k.mode);
    h = h * 1000003u ^ (k.stmt ? k.stmt->hash : 0);
    h = h * 1000003u ^ (k.cont ? k.cont->hash : 0);
    h = h * 1000003u ^ k.state.hash();
    return h * 1000003u ^ std::hash<const void*>()(k.src);
  }
};

struct ShareEq {
  bool operator()(const ShareKey& a, const ShareKey& b) const {
    if (a.tag != b.tag || a.mode != b.mode || a.src != b.src || a.state != b.state) return false;
    if (static_cast<bool>(a.stmt) != static_cast<bool>(b.stmt)) return false;
    if (a.stmt && !equal(*a.stmt, *b.stmt)) return false;
    if (static_cast<bool>(a.cont) != static_cast<bool>(b.cont)) return false;
    return !a.cont || equal(*a.cont, *b.cont);
  }
};

}  // namespace

struct SharingScope::Cache {
  std::unordered_map<ShareKey, Res, ShareHash, ShareEq> res;
  std::unordered_map<ShareKey, GRes, ShareHash, ShareEq> gres;
  // Values keep the source cell alive so its identity stays unique.
  std::unordered_map<ShareKey, std::pair<Res, Res>, ShareHash, ShareEq> res_over;
  std::unordered_map<ShareKey, std::pair<GRes, GRes>, ShareHash, ShareEq> gres_over;
};

namespace {
thread_local SharingScope::Cache* current_cache = nullptr;
}

SharingScope::SharingScope() : prev_(current_cache), own_(std::make_unique<Cache>()) {
  current_cache = own_.get();
}

SharingScope::~SharingScope() { current_cache = prev_; }

namespace detail {

Res shared_res(char tag, int mode, const StmtPtr& stmt, const State& st,
               const std::function<Res()>& make) {
  if (!current_cache) return make();
  ShareKey key{tag, mode, stmt, nullptr, st};
  auto it = current_cache->res.find(key);
  if (it != current_cache->res.end()) return it->second;
  Res r = make();
  current_cache->res.emplace(std::move(key), r);
  return r;
}

GRes shared_gres(char tag, int mode, const StmtPtr& stmt,
                 const std::shared_ptr<const ContKey>& cont, const State& st,
                 const std::function<GRes()>& make) {
  if (!current_cache || (!stmt && !cont)) return make();
  ShareKey key{tag, mode, stmt, cont, st};
  auto it = current_cache->gres.find(key);
  if (it != current_cache->gres.end()) return it->second;
  GRes r = make();
  current_cache->gres.emplace(std::move(key), r);
  return r;
}

Res shared_res_over(char tag, int mode, const StmtPtr& stmt, const Res& src,
                    const std::function<Res()>& make) {
  if (!current_cache) return make();
  ShareKey key{tag, mode, stmt, nullptr, State(), src.identity()};
  auto it = current_cache->res_over.find(key);
  if (it != current_cache->res_over.end()) return it->second.second;
  Res r = make();
  current_cache->res_over.emplace(std::move(key), std::make_pair(src, r));
  return r;
}

GRes shared_gres_over(char tag, int mode, const StmtPtr& stmt,
                      const std::shared_ptr<const ContKey>& cont, const GRes& src,
                      const std::function<GRes()>& make) {
  if (!current_cache) return make();
  ShareKey key{tag, mode, stmt, cont, State(), src.identity()};
  auto it = current_cache->gres_over.find(key);
  if (it != current_cache->gres_over.end()) return it->second.second;
  GRes r = make();
  current_cache->gres_over.emplace(std::move(key), std::make_pair(src, r));
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------

bool FiniteTree::has_yield() const {
  if (kind == Kind::Yield) return true;
  for (const auto& c : children)
    if (c.has_yield()) return true;
  return false;
}

std::size_t FiniteTree::depth() const {
  if (kind == Kind::Pruned) return 0;
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

bool operator==(const FiniteTree& a, const FiniteTree& b) {
  if (a.kind != b.kind || a.note != b.note || a.children.size() != b.children.size() ||
      a.probes != b.probes)
    return false;
  if ((a.kind == FiniteTree::Kind::Ret || a.kind == FiniteTree::Kind::Yield) && a.state != b.state)
    return false;
  if (static_cast<bool>(a.stmt) != static_cast<bool>(b.stmt)) return false;
  if (a.stmt && !equal(*a.stmt, *b.stmt)) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (a.children[i] != b.children[i]) return false;
  return true;
}

FiniteTree prefix(const Res& r, std::size_t depth) {
  FiniteTree t;
  if (depth == 0) return t;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, res::Ret>) {
          t.kind = FiniteTree::Kind::Ret;
          t.state = n.state;
        } else if constexpr (std::is_same_v<T, res::Delay>) {
          t.kind = FiniteTree::Kind::Delay;
          t.children.push_back(prefix(n.next, depth - 1));
        } else if constexpr (std::is_same_v<T, res::Plus>) {
          t.kind = FiniteTree::Kind::Plus;
          t.children.push_back(prefix(n.left, depth - 1));
          t.children.push_back(prefix(n.right, depth - 1));
        } else {
          t.kind = FiniteTree::Kind::Yield;
          t.stmt = n.stmt;
          t.state = n.state;
        }
      },
      r.force());
  return t;
}

FiniteTree prefix_g(const GRes& r, std::size_t depth, const std::vector<State>& probes) {
  FiniteTree t;
  if (depth == 0) return t;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, gres::Ret>) {
          t.kind = FiniteTree::Kind::Ret;
          t.state = n.state;
        } else if constexpr (std::is_same_v<T, gres::Delay>) {
          t.kind = FiniteTree::Kind::Delay;
          t.children.push_back(prefix_g(n.next, depth - 1, probes));
        } else if constexpr (std::is_same_v<T, gres::Plus>) {
          t.kind = FiniteTree::Kind::Plus;
          t.children.push_back(prefix_g(n.left, depth - 1, probes));
          t.children.push_back(prefix_g(n.right, depth - 1, probes));
        } else {
          t.kind = FiniteTree::Kind::Yield;
          t.state = n.state;
          t.probes = probes;
          for (const auto& p : probes)
            t.children.push_back(depth > 1 ? prefix_g(n.cont(p), depth - 1, probes)
                                           : FiniteTree::pruned());
        }
      },
      r.force());
  return t;
}

namespace {

using Explored = std::unordered_map<const void*, std::size_t>;

// Marks `id` explored to `depth`; false if that was already done.
bool first_visit(Explored& seen, const void* id, std::size_t depth) {
  auto [it, fresh] = seen.emplace(id, depth);
  if (fresh) return true;
  if (it->second >= depth) return false;
  it->second = depth;
  return true;
}

bool has_yield_rec(const Res& r, std::size_t depth, Explored& seen) {
  if (depth == 0 || !first_visit(seen, r.identity(), depth)) return false;
  const res::Node& n = r.force();
  if (std::holds_alternative<res::Yield>(n)) return true;
  if (const auto* d = std::get_if<res::Delay>(&n)) return has_yield_rec(d->next, depth - 1, seen);
  if (const auto* p = std::get_if<res::Plus>(&n))
    return has_yield_rec(p->left, depth - 1, seen) || has_yield_rec(p->right, depth - 1, seen);
  return false;
}

bool has_yield_g_rec(const GRes& r, std::size_t depth, Explored& seen) {
  if (depth == 0 || !first_visit(seen, r.identity(), depth)) return false;
  const gres::Node& n = r.force();
  if (std::holds_alternative<gres::Yield>(n)) return true;
  if (const auto* d = std::get_if<gres::Delay>(&n))
    return has_yield_g_rec(d->next, depth - 1, seen);
  if (const auto* p = std::get_if<gres::Plus>(&n))
    return has_yield_g_rec(p->left, depth - 1, seen) ||
           has_yield_g_rec(p->right, depth - 1, seen);
  return false;
}

void yields_rec(const Res& r, std::size_t depth, Explored& seen, std::vector<res::Yield>& out) {
  if (depth == 0) return;
  bool fresh = !seen.count(r.identity());
  if (!first_visit(seen, r.identity(), depth)) return;
  const res::Node& n = r.force();
  if (const auto* y = std::get_if<res::Yield>(&n)) {
    if (fresh) out.push_back(*y);
  } else if (const auto* d = std::get_if<res::Delay>(&n)) {
    yields_rec(d->next, depth - 1, seen, out);
  } else if (const auto* p = std::get_if<res::Plus>(&n)) {
    yields_rec(p->left, depth - 1, seen, out);
    yields_rec(p->right, depth - 1, seen, out);
  }
}

}  // namespace

std::vector<res::Yield> yields_within(const Res& r, std::size_t depth) {
  Explored seen;
  std::vector<res::Yield> out;
  yields_rec(r, depth, seen, out);
  return out;
}

bool has_yield(const Res& r, std::size_t depth) {
  Explored seen;
  return has_yield_rec(r, depth, seen);
}

bool has_yield(const GRes& r, std::size_t depth) {
  Explored seen;
  return has_yield_g_rec(r, depth, seen);
}

FiniteTree truncate(const FiniteTree& t, std::size_t depth) {
  if (depth == 0) return FiniteTree::pruned();
  FiniteTree out = t;
  for (auto& c : out.children) c = truncate(c, depth - 1);
  return out;
}

namespace {

void render_into(const FiniteTree& t, std::string& out) {
  const FiniteTree* cur = &t;
  std::size_t delays = 0;
  while (cur->kind == FiniteTree::Kind::Delay) {
    ++delays;
    cur = &cur->children.front();
  }
  if (delays == 1) {
    out += "δ ";
  } else if (delays > 1) {
    out += "δ^" + std::to_string(delays) + " ";
  }
  switch (cur->kind) {
    case FiniteTree::Kind::Ret:
      out += "ret " + cur->state.to_string();
      break;
    case FiniteTree::Kind::Plus:
      out += '(';
      render_into(cur->children[0], out);
      out += " + ";
      render_into(cur->children[1], out);
      out += ')';
      break;
    case FiniteTree::Kind::Yield:
      if (cur->stmt) {
        out += "yield ⟨" + pretty(*cur->stmt) + "⟩ " + cur->state.to_string();
      } else {
        out += "yield " + cur->state.to_string() + " [";
        for (std::size_t i = 0; i < cur->probes.size(); ++i) {
          if (i) out += "; ";
          out += "σ′=" + cur->probes[i].to_string() + " ↦ ";
          render_into(cur->children[i], out);
        }
        out += ']';
      }
      break;
    case FiniteTree::Kind::Pruned:
      out += "…";
      break;
    case FiniteTree::Kind::Stuck:
      out += "stuck(" + cur->note + ")";
      break;
    case FiniteTree::Kind::Delay:
      break;
  }
}

const char* kind_name(FiniteTree::Kind k) {
  switch (k) {
    case FiniteTree::Kind::Ret: return "ret";
    case FiniteTree::Kind::Delay: return "delay";
    case FiniteTree::Kind::Plus: return "plus";
    case FiniteTree::Kind::Yield: return "yield";
    case FiniteTree::Kind::Pruned: return "pruned";
    case FiniteTree::Kind::Stuck: return "stuck";
  }
  return "?";
}

}  // namespace

std::string render(const FiniteTree& t) {
  std::string out;
  render_into(t, out);
  return out;
}

nlohmann::json to_json(const State& st) {
  auto obj = nlohmann::json::object();
  for (const auto& [k, v] : st.vars()) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
      obj[k] = v.convert_to<long long>();
    else
      obj[k] = v.str();
  }
  return obj;
}

nlohmann::json to_json(const FiniteTree& t) {
  nlohmann::json j;
  j["kind"] = kind_name(t.kind);
  if (t.kind == FiniteTree::Kind::Ret || t.kind == FiniteTree::Kind::Yield)
    j["state"] = to_json(t.state);
  if (t.stmt) j["stmt"] = pretty(*t.stmt);
  if (t.kind == FiniteTree::Kind::Stuck) j["note"] = t.note;
  if (!t.children.empty()) {
    auto children = nlohmann::json::array();
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      auto c = to_json(t.children[i]);
      if (i < t.probes.size()) c["probe"] = to_json(t.probes[i]);
      children.push_back(std::move(c));
    }
    j["children"] = std::move(children);
  }
  return j;
}

}  // namespace cosem
