#pragma once

// Big-step evaluation as total corecursive functions producing lazy
// resumptions. Every assignment and guard test contributes one δ.

#include "cosem/lang.hpp"
#include "cosem/resumption.hpp"
#include "cosem/sched_mode.hpp"

namespace cosem {

/// Evaluation up to the nearest control release points.
/// Precondition: `s` contains no auxiliary forms.
Res eval(const StmtPtr& s, const State& st, SchedMode mode = SchedMode::Preemptive);

/// Sequential extension: runs `s` after `r` terminates.
Res evalseq(const StmtPtr& s, const Res& r, SchedMode mode = SchedMode::Preemptive);

/// Parallel extension with `s` on the right of `r`'s thread.
Res evalpar_r(const StmtPtr& s, const Res& r, SchedMode mode = SchedMode::Preemptive);
/// Parallel extension with `s` on the left of `r`'s thread.
Res evalpar_l(const StmtPtr& s, const Res& r, SchedMode mode = SchedMode::Preemptive);

/// Replaces every yield by a δ followed by evaluation of the residual.
Res close(const Res& r, SchedMode mode = SchedMode::Preemptive);

/// True if a yielded statement stems from a blocked await: an await placed
/// at the head of sequential compositions or in either thread of a parallel
/// composition (`skip;` prefixes are looked through).
bool is_await_residual(const Stmt& s);

}  // namespace cosem
