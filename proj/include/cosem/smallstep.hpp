#pragma once

// Reference small-step semantics over extended configurations, and maximal
// multi-step reduction into big-step (mmred) or giant-step (gmmred)
// resumptions.

#include "cosem/lang.hpp"
#include "cosem/resumption.hpp"
#include "cosem/sched_mode.hpp"

#include <string>
#include <variant>

namespace cosem {

namespace xcfg {
struct Ret { State state; };
struct Delay { StmtPtr stmt; State state; };
struct Plus { StmtPtr left; State left_state; StmtPtr right; State right_state; };
struct Yield { StmtPtr stmt; State state; };

// Statements compare structurally; std::variant's == builds on these.
inline bool operator==(const Ret& a, const Ret& b) { return a.state == b.state; }
inline bool operator==(const Delay& a, const Delay& b) {
  return equal(a.stmt, b.stmt) && a.state == b.state;
}
inline bool operator==(const Plus& a, const Plus& b) {
  return equal(a.left, b.left) && a.left_state == b.left_state && equal(a.right, b.right) &&
         a.right_state == b.right_state;
}
inline bool operator==(const Yield& a, const Yield& b) {
  return equal(a.stmt, b.stmt) && a.state == b.state;
}
}  // namespace xcfg

/// Extended configuration: the outcome of exactly one small step.
using XCfg = std::variant<xcfg::Ret, xcfg::Delay, xcfg::Plus, xcfg::Yield>;


/// Single-step reduction. Throws std::invalid_argument for `suspend` in
/// preemptive mode, where it is not part of the language.
XCfg red(const StmtPtr& s, const State& st, SchedMode mode = SchedMode::Preemptive);

Res mmred(const StmtPtr& s, const State& st, SchedMode mode = SchedMode::Preemptive);

/// Like mmred, but also reduces under yields: a yield of residual s′ becomes
/// a yield of λσ″. gmmred(s′, σ″).
GRes gmmred(const StmtPtr& s, const State& st, SchedMode mode = SchedMode::Preemptive);

/// Debug rendering, e.g. `δ(skip, {x=1})` or `(s₀ ⌊ s₁, σ) + (s₀ ⌋ s₁, σ)`.
std::string render(const XCfg& c);

}  // namespace cosem
