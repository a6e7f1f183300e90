#pragma once

namespace cosem {

/// Preemptive: control may be released at guard tests and at the midpoint of
/// every composition. Cooperative: only await releases control.
enum class SchedMode { Preemptive, Cooperative };

inline const char* to_string(SchedMode m) {
  return m == SchedMode::Preemptive ? "preempt" : "coop";
}

}  // namespace cosem
