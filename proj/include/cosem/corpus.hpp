#pragma once

// Seeded random program generator for property suites.

#include "cosem/lang.hpp"

#include <cstdint>
#include <vector>

namespace cosem {

struct CorpusEntry {
  StmtPtr program;
  State initial;
};

/// `count` programs over variables x and y with at most `max_size`
/// statement nodes. Deterministic for a fixed seed. Loops inside atomic
/// blocks never contain parallel composition, which keeps closed
/// resumptions from branching at every iteration.
std::vector<CorpusEntry> gen_corpus(std::uint64_t seed, std::size_t count, std::size_t max_size);

/// The initial states each corpus program is run from: {}, {x=1, y=2},
/// {x=3, y=0}.
std::vector<State> corpus_states();

}  // namespace cosem
