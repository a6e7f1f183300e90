#pragma once

// Linear traces: one scheduling's worth of behavior. Nondeterminism is
// resolved by explicit oracles: a schedule of L/R choices for parallel
// compositions and, for giant-step traces, the states control comes back in.

#include "cosem/lang.hpp"
#include "cosem/resumption.hpp"
#include "cosem/sched_mode.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cosem {

namespace trace {
struct Ret;
struct Delay;
struct Yield;
using Node = std::variant<Ret, Delay, Yield>;
}  // namespace trace

using Trace = Codata<trace::Node>;

namespace trace {
struct Ret { State state; };
struct Delay { Trace next; };
struct Yield { StmtPtr stmt; State state; };
}  // namespace trace

namespace gtrace {
struct Ret;
struct Delay;
struct Yield;
struct Stuck;
using Node = std::variant<Ret, Delay, Yield, Stuck>;
}  // namespace gtrace

using GTrace = Codata<gtrace::Node>;

namespace gtrace {
struct Ret { State state; };
struct Delay { GTrace next; };
/// Control released in `state`, regained in `resumed`, continuing as `next`.
struct Yield { State resumed; GTrace next; State state; };
/// Closing hit a yield whose release and regain states differ.
struct Stuck { std::string note; };
}  // namespace gtrace

enum class Choice { L, R };

/// Sequence of choices read through a shared cursor. Exhausted finite
/// schedules answer L; cyclic ones wrap around.
class Schedule {
 public:
  Schedule();
  Schedule(std::vector<Choice> choices, bool cyclic = false);

  /// `LRL`, `LR*` (repeat forever), or empty.
  static Schedule parse(std::string_view text);

  Choice next() const;
  std::size_t consumed() const;
  std::string to_string() const;

 private:
  struct Cursor {
    std::vector<Choice> choices;
    bool cyclic = false;
    std::size_t pos = 0;
  };
  std::shared_ptr<Cursor> cur_;
};

/// States in which control is regained, consumed in order. An exhausted
/// oracle answers with the release state.
class ResumeOracle {
 public:
  ResumeOracle();
  explicit ResumeOracle(std::vector<State> states);

  /// `;`-separated state literals, e.g. `{x=0}; {x=3}`.
  static ResumeOracle parse(std::string_view text);

  State next(const State& released) const;

 private:
  struct Cursor {
    std::vector<State> states;
    std::size_t pos = 0;
  };
  std::shared_ptr<Cursor> cur_;
};

Trace trace_eval(const StmtPtr& s, const State& st, const Schedule& sched,
                 SchedMode mode = SchedMode::Preemptive);

/// Homomorphic on ret/δ; yield s σ becomes δ of the closed trace of s.
Trace close_trace(const Trace& t, const Schedule& sched, SchedMode mode = SchedMode::Preemptive);

GTrace trace_eval_g(const StmtPtr& s, const State& st, const Schedule& sched,
                    const ResumeOracle& resume, SchedMode mode = SchedMode::Preemptive);

/// Defined on yields only when control is regained in the release state;
/// otherwise produces a Stuck node with a diagnostic.
GTrace close_trace_g(const GTrace& t);

/// Whether `t` is a path of `r` to `depth` r-nodes: + may be resolved to
/// either child, everything else must match exactly.
bool is_path_of(const Trace& t, const Res& r, std::size_t depth);

/// Giant-step analogue: at a yield the continuation of `r` is applied to
/// the state the trace resumes in.
bool is_path_of_g(const GTrace& t, const GRes& r, std::size_t depth);

/// Whether `t` follows the path of `r` that resolves the +-nodes met along
/// the way by `choices` in order (then L).
bool follows(const Trace& t, const Res& r, const std::vector<Choice>& choices,
             std::size_t depth);

/// The choice sequences of every +-resolution path of `r` cut at `depth`.
std::vector<std::vector<Choice>> plus_paths(const Res& r, std::size_t depth);

FiniteTree prefix(const Trace& t, std::size_t depth);
FiniteTree prefix(const GTrace& t, std::size_t depth);

}  // namespace cosem
