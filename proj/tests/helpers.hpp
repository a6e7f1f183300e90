#pragma once

#include "cosem/lang.hpp"
#include "cosem/resumption.hpp"

#include <string>

namespace cosem::test {

inline StmtPtr P(const std::string& src) { return parse(src); }
inline State S(const std::string& src) { return parse_state(src); }

inline std::string show(const Res& r, std::size_t depth) { return render(prefix(r, depth)); }

}  // namespace cosem::test
