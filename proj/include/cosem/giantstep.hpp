#pragma once

// Giant-step evaluation: statements run past control release points for
// every state control may come back in, so yields carry continuations.

#include "cosem/lang.hpp"
#include "cosem/resumption.hpp"
#include "cosem/sched_mode.hpp"

#include <vector>

namespace cosem {

GRes eval_g(const StmtPtr& s, const State& st, SchedMode mode = SchedMode::Preemptive);

/// The continuation λσ. eval_g(s, σ).
Continuation eval_g_cont(const StmtPtr& s, SchedMode mode = SchedMode::Preemptive);

GRes evalseq_g(const StmtPtr& s, const GRes& r, SchedMode mode = SchedMode::Preemptive);

/// Merges a pending right thread `k` into the running left thread `r`.
GRes merge_r_g(const Continuation& k, const GRes& r, SchedMode mode = SchedMode::Preemptive);
/// Merges a pending left thread `k` into the running right thread `r`.
GRes merge_l_g(const Continuation& k, const GRes& r, SchedMode mode = SchedMode::Preemptive);

GRes close_g(const GRes& r, SchedMode mode = SchedMode::Preemptive);

/// Reinterprets a yield-free giant-step resumption as a big-step one.
/// Forcing a node that turns out to be a yield throws std::logic_error.
Res flatten(const GRes& r);

/// All states mapping `vars` to values in {0,1,2,3} (at most `cap` of
/// them, in lexicographic order), followed by `initial` when not already
/// included.
std::vector<State> default_probes(const std::set<std::string>& vars, const State& initial,
                                  std::size_t cap = 64);

}  // namespace cosem
