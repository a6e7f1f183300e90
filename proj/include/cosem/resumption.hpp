#pragma once

// Lazy resumption trees: big-step resumptions whose yields carry residual
// statements, and giant-step resumptions whose yields carry continuations.

#include "cosem/codata.hpp"
#include "cosem/lang.hpp"

#include "json.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cosem {

namespace res {
struct Ret;
struct Delay;
struct Plus;
struct Yield;
using Node = std::variant<Ret, Delay, Plus, Yield>;
}  // namespace res

/// Big-step resumption: ret σ, δ r, r₀ + r₁, or yield s σ.
using Res = Codata<res::Node>;

namespace res {
struct Ret { State state; };
struct Delay { Res next; };
struct Plus { Res left, right; };
struct Yield { StmtPtr stmt; State state; };
}  // namespace res

namespace gres {
struct Ret;
struct Delay;
struct Plus;
struct Yield;
using Node = std::variant<Ret, Delay, Plus, Yield>;
}  // namespace gres

/// Giant-step resumption: like Res, but yields carry a continuation.
using GRes = Codata<gres::Node>;

/// Structural description of how a continuation was built. Two
/// continuations with equal keys denote the same function, which lets
/// checkers reuse work across probe states. Continuations built from opaque
/// functions have no key.
struct ContKey {
  char tag;
  StmtPtr stmt;
  std::shared_ptr<const ContKey> a, b;
  int mode;
  std::size_t hash;

  static std::shared_ptr<const ContKey> make(char tag, int mode, StmtPtr stmt,
                                             std::shared_ptr<const ContKey> a = nullptr,
                                             std::shared_ptr<const ContKey> b = nullptr);
};

bool equal(const ContKey& a, const ContKey& b);

/// A total function from states to giant-step resumptions.
class Continuation {
 public:
  using Fn = std::function<GRes(const State&)>;

  Continuation() = default;
  explicit Continuation(Fn fn, std::shared_ptr<const ContKey> key = nullptr)
      : fn_(std::make_shared<const Fn>(std::move(fn))), key_(std::move(key)) {}

  GRes operator()(const State& st) const;
  const std::shared_ptr<const ContKey>& key() const { return key_; }

 private:
  std::shared_ptr<const Fn> fn_;
  std::shared_ptr<const ContKey> key_;
};

namespace gres {
struct Ret { State state; };
struct Delay { GRes next; };
struct Plus { GRes left, right; };
struct Yield { Continuation cont; State state; };
}  // namespace gres

inline GRes Continuation::operator()(const State& st) const { return (*fn_)(st); }

Res res_ret(State st);
Res res_delay(Res next);
Res res_plus(Res left, Res right);
Res res_yield(StmtPtr stmt, State st);

GRes gres_ret(State st);
GRes gres_delay(GRes next);
GRes gres_plus(GRes left, GRes right);
GRes gres_yield(Continuation k, State st);

/// δ∞ = δ δ∞.
Res delta_inf();
GRes gdelta_inf();

/// Peels n delays onto r.
Res delays(std::size_t n, Res r);

// ---------------------------------------------------------------------------
// Sharing

/// While a scope is alive on a thread, evaluators running on that thread
/// hand out the same lazy cell for equal (function, statement, state, mode)
/// requests, so resumptions become DAGs instead of trees. Purely an
/// optimization: results are unchanged. Scopes nest.
class SharingScope {
 public:
  SharingScope();
  ~SharingScope();
  SharingScope(const SharingScope&) = delete;
  SharingScope& operator=(const SharingScope&) = delete;

  struct Cache;

 private:
  Cache* prev_;
  std::unique_ptr<Cache> own_;
};

namespace detail {
/// `tag` names the memoized function. `cont` distinguishes continuation
/// applications; `stmt` may be null then.
Res shared_res(char tag, int mode, const StmtPtr& stmt, const State& st,
               const std::function<Res()>& make);
GRes shared_gres(char tag, int mode, const StmtPtr& stmt,
                 const std::shared_ptr<const ContKey>& cont, const State& st,
                 const std::function<GRes()>& make);

/// Same, for functions of an existing cell `src` (keyed by its identity).
Res shared_res_over(char tag, int mode, const StmtPtr& stmt, const Res& src,
                    const std::function<Res()>& make);
GRes shared_gres_over(char tag, int mode, const StmtPtr& stmt,
                      const std::shared_ptr<const ContKey>& cont, const GRes& src,
                      const std::function<GRes()>& make);
}  // namespace detail

// ---------------------------------------------------------------------------
// Bounded observation

/// Fully materialized prefix of a resumption or trace. Nodes at the depth
/// bound are Pruned.
struct FiniteTree {
  enum class Kind { Ret, Delay, Plus, Yield, Pruned, Stuck };

  Kind kind = Kind::Pruned;
  State state;            // Ret, Yield
  StmtPtr stmt;           // Yield carrying a residual statement
  std::vector<State> probes;  // Yield carrying a continuation: child i is k(probes[i])
  std::vector<FiniteTree> children;
  std::string note;       // Stuck: diagnostic

  static FiniteTree pruned() { return {}; }

  bool has_yield() const;
  std::size_t depth() const;
};

bool operator==(const FiniteTree& a, const FiniteTree& b);
inline bool operator!=(const FiniteTree& a, const FiniteTree& b) { return !(a == b); }

FiniteTree prefix(const Res& r, std::size_t depth);

/// Same answer as prefix(r, depth).has_yield(), without materializing the
/// tree: shared cells are visited once per depth.
bool has_yield(const Res& r, std::size_t depth);
bool has_yield(const GRes& r, std::size_t depth);

/// The yield nodes of prefix(r, depth), each shared cell reported once.
std::vector<res::Yield> yields_within(const Res& r, std::size_t depth);
FiniteTree prefix_g(const GRes& r, std::size_t depth, const std::vector<State>& probes);

/// Cuts a tree down to `depth` levels.
FiniteTree truncate(const FiniteTree& t, std::size_t depth);

/// Text rendering: `ret {x=1}`, `δ^k …`, `(l + r)`, `yield ⟨s⟩ {x=1}`,
/// `yield {x=1} [σ′={x=7} ↦ …; …]`, `…` for pruned.
std::string render(const FiniteTree& t);

/// Hierarchical record form with fields kind/state/stmt/children/probe.
nlohmann::json to_json(const FiniteTree& t);
nlohmann::json to_json(const State& st);

}  // namespace cosem
