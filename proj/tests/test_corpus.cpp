#include "cosem/corpus.hpp"
#include "doctest.h"

#include <set>
#include <string>

using namespace cosem;

namespace {
void constructors(const Stmt& s, std::set<std::size_t>& seen, bool& neg_guard) {
  seen.insert(s.node.index());
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stmt::Seq>) {
          constructors(*n.first, seen, neg_guard);
          constructors(*n.second, seen, neg_guard);
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          constructors(*n.left, seen, neg_guard);
          constructors(*n.right, seen, neg_guard);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          if (n.guard->node.index() == 5) neg_guard = true;
          constructors(*n.then_branch, seen, neg_guard);
          constructors(*n.else_branch, seen, neg_guard);
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          constructors(*n.body, seen, neg_guard);
        } else if constexpr (std::is_same_v<T, Stmt::Atomic> || std::is_same_v<T, Stmt::Await>) {
          constructors(*n.body, seen, neg_guard);
        }
      },
      s.node);
}
}  // namespace

TEST_CASE("smallest programs") {
  auto c = gen_corpus(7, 1, 1);
  REQUIRE(c.size() == 1);
  CHECK((c[0].program->is<Stmt::Skip>() || c[0].program->is<Stmt::Assign>()));
  CHECK(c[0].initial == State());
  for (const auto& e : gen_corpus(8, 50, 1))
    CHECK((e.program->is<Stmt::Skip>() || e.program->is<Stmt::Assign>()));
}

TEST_CASE("determinism") {
  auto a = gen_corpus(42, 500, 12), b = gen_corpus(42, 500, 12);
  REQUIRE(a.size() == 500);
  std::string ta, tb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ta += pretty(*a[i].program) + "\n";
    tb += pretty(*b[i].program) + "\n";
  }
  CHECK(ta == tb);
  std::string tc;
  for (const auto& e : gen_corpus(43, 500, 12)) tc += pretty(*e.program) + "\n";
  CHECK(ta != tc);
}

TEST_CASE("coverage") {
  std::set<std::size_t> seen;
  bool neg_guard = false;
  for (const auto& e : gen_corpus(42, 500, 12)) {
    CHECK_FALSE(has_auxiliary_forms(*e.program));
    CHECK(size(*e.program) > 0);
    constructors(*e.program, seen, neg_guard);
  }
  // the eight source constructors; the ninth production (expressions in
  // both polarities) is checked via negated guards
  CHECK(seen == std::set<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(neg_guard);
}

TEST_CASE("initial states") {
  auto st = corpus_states();
  REQUIRE(st.size() == 3);
  CHECK(st[0] == State());
  CHECK(st[1].to_string() == "{x=1, y=2}");
  CHECK(st[2].to_string() == "{x=3, y=0}");
}
