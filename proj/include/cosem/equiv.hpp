#pragma once

// Bounded, three-valued equivalence checks on resumptions.

#include "cosem/lang.hpp"
#include "cosem/resumption.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cosem {

/// One step of a counterexample path.
struct PathStep {
  enum class Kind { Delay, PlusL, PlusR, Probe, Converge };
  Kind kind;
  State probe;  // Probe only
};

using Path = std::vector<PathStep>;

/// `δ`, `+L `, `+R `, `↦{x=1} `, `↓`; the empty path is `ε`.
std::string render(const Path& path);

struct Verdict {
  enum class Outcome { Holds, Fails, Unknown };
  enum class Budget { Fuel, Depth };

  Outcome outcome = Outcome::Holds;
  std::size_t depth = 0;       // Holds
  Path path;                   // Fails, Unknown
  std::string reason;          // Fails
  Budget budget = Budget::Fuel;  // Unknown

  static Verdict holds(std::size_t depth);
  static Verdict fails(Path path, std::string reason);
  static Verdict unknown(Budget budget, Path path);

  bool is_holds() const { return outcome == Outcome::Holds; }
  bool is_fails() const { return outcome == Outcome::Fails; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }
};

/// `HOLDS(depth=60)`, `FAILS(path=δ+L , reason=…)`, `UNKNOWN(budget=fuel, at=δ)`.
std::string render(const Verdict& v);

/// Comparison of yielded residual statements. Defaults to structural
/// equality.
using StmtEq = std::function<bool(const Stmt&, const Stmt&)>;

/// Structural equality modulo `skip; s ≡ s` anywhere in the statement. In
/// cooperative mode a leading skip is unobservable.
bool equal_modulo_skip_unit(const Stmt& a, const Stmt& b);

Verdict strong_bisim(const Res& a, const Res& b, std::size_t depth, const StmtEq& eq = {});

/// Continuations are compared at each probe state. Pairs of keyed
/// continuations already checked at a probe to sufficient depth are not
/// re-explored.
Verdict strong_bisim_g(const GRes& a, const GRes& b, std::size_t depth,
                       const std::vector<State>& probes);

struct Convergence {
  bool converged = false;
  std::optional<Res> node;   // the frontier r′ when converged
  std::size_t fuel_used = 0;
};

/// r ↓ r′: strips delays above the ret/yield/+ frontier; under + both
/// children must converge. Fuel is shared across the whole frontier.
Convergence converges(const Res& r, std::size_t fuel);

/// True iff the first `fuel` forcings are all delays.
bool diverges(const Res& r, std::size_t fuel);

/// Termination-sensitive weak bisimilarity. When exactly one side is a δ,
/// its leading delays are stripped (at most `fuel` of them) and the heads
/// are matched; + children are then related recursively.
Verdict weak_bisim(const Res& a, const Res& b, std::size_t depth, std::size_t fuel,
                   const StmtEq& eq = {});

/// Walks `path` in both resumptions and reports whether the nodes reached
/// differ. `↓` steps strip leading delays on both sides (bounded by `fuel`).
bool replay_mismatch(const Res& a, const Res& b, const Path& path, const StmtEq& eq = {},
                     std::size_t fuel = 1000);
bool replay_mismatch_g(const GRes& a, const GRes& b, const Path& path);

}  // namespace cosem
