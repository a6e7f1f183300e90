#include "cosem/bigstep.hpp"
#include "cosem/corpus.hpp"
#include "cosem/equiv.hpp"
#include "cosem/giantstep.hpp"
#include "cosem/resumption.hpp"
#include "doctest.h"
#include "helpers.hpp"

#include <atomic>
#include <thread>

using namespace cosem;
using namespace cosem::test;

namespace {
const char* kEx1 = "x := 1 || (x := x+2; x := x+2)";
}

TEST_CASE("force: constructors") {
  auto r = std::get<res::Ret>(res_ret(S("{x=5}")).force());
  CHECK(r.state == S("{x=5}"));

  Res inf = delta_inf();
  auto d = std::get<res::Delay>(inf.force());
  CHECK(d.next.identity() == inf.identity());

  State st = S("{x=1}");
  Res three = delays(3, res_ret(st));
  auto d3 = std::get<res::Delay>(three.force());
  CHECK(render(prefix(d3.next, 10)) == "δ^2 ret {x=1}");
}

TEST_CASE("force is idempotent and runs the producer once") {
  int runs = 0;
  Res r = Res::deferred([&] {
    ++runs;
    return res::Node(res::Delay{res_ret(State())});
  });
  const auto& a = r.force();
  const auto& b = r.force();
  CHECK(&a == &b);
  CHECK(runs == 1);
  CHECK(std::get<res::Delay>(a).next.identity() == std::get<res::Delay>(b).next.identity());
}

TEST_CASE("forcing is thread safe") {
  std::atomic<int> runs{0};
  Res r = Res::deferred([&] {
    ++runs;
    return res::Node(res::Ret{State()});
  });
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i) pool.emplace_back([&] { (void)r.force(); });
  for (auto& t : pool) t.join();
  CHECK(runs == 1);
}

TEST_CASE("prefix") {
  CHECK(render(prefix(delta_inf(), 3)) == "δ^3 …");
  FiniteTree t = prefix(delta_inf(), 3);
  CHECK(t.kind == FiniteTree::Kind::Delay);
  CHECK(t.children[0].children[0].children[0].kind == FiniteTree::Kind::Pruned);
  CHECK(prefix(res_ret(S("{x=1}")), 0).kind == FiniteTree::Kind::Pruned);
  FiniteTree d = prefix(res_delay(res_ret(S("{x=1}"))), 2);
  CHECK(d.kind == FiniteTree::Kind::Delay);
  CHECK(d.children[0].kind == FiniteTree::Kind::Ret);
  CHECK(d.children[0].state == S("{x=1}"));

  FiniteTree ex = prefix(eval(P(kEx1), S("{x=0}")), 3);
  REQUIRE(ex.kind == FiniteTree::Kind::Plus);
  for (const auto& [i, st] : {std::pair{0, "{x=1}"}, std::pair{1, "{x=2}"}}) {
    const auto& c = ex.children[i];
    REQUIRE(c.kind == FiniteTree::Kind::Delay);
    CHECK(c.children[0].kind == FiniteTree::Kind::Yield);
    CHECK(c.children[0].state == S(st));
  }
}

TEST_CASE("prefix is stable under deeper observation") {
  for (const auto& e : gen_corpus(11, 60, 10)) {
    Res r = eval(e.program, S("{x=1, y=2}"));
    for (std::size_t d : {0u, 1u, 4u, 12u}) {
      FiniteTree a = prefix(r, d);
      CHECK(a == prefix(r, d));
      CHECK(a == truncate(prefix(r, d + 1), d));
    }
  }
}

TEST_CASE("productivity: deep prefixes terminate") {
  for (const char* src : {"while true do skip od", "while true do x := x+1 od || y := 1",
                          "atomic { while true do skip od }", kEx1}) {
    Res r = eval(P(src), State());
    CHECK(prefix(r, 1000).depth() <= 1000);
    Res c = close(r);
    CHECK(prefix(c, 1000).depth() <= 1000);
  }
}

TEST_CASE("prefix_g") {
  std::vector<State> probes{S("{x=7}")};
  CHECK(render(prefix_g(gres_ret(S("{x=0}")), 5, probes)) == "ret {x=0}");
  GRes y = gres_delay(gres_yield(eval_g_cont(Stmt::skip()), S("{x=1}")));
  FiniteTree t = prefix_g(y, 1, probes);
  CHECK(t.kind == FiniteTree::Kind::Delay);
  CHECK(t.children[0].kind == FiniteTree::Kind::Pruned);
}

TEST_CASE("prefix_g of the interleaving example at σ′={x=7}") {
  GRes r = eval_g(P(kEx1), S("{x=0}"));
  // Hand unfolding: the left branch runs x := 1, gives up control, and
  // resumes the pending right thread in {x=7}; the right branch runs one
  // x := x+2 and resumes x := 1 || x := x+2 in {x=7}.
  CHECK(render(prefix_g(r, 7, {S("{x=7}")})) ==
        "(δ yield {x=1} [σ′={x=7} ↦ δ yield {x=9} [σ′={x=7} ↦ δ ret {x=9}]] + "
        "δ yield {x=2} [σ′={x=7} ↦ (δ yield {x=1} [σ′={x=7} ↦ δ …] + "
        "δ yield {x=9} [σ′={x=7} ↦ δ …])])");
  FiniteTree four = prefix_g(r, 4, {S("{x=7}")});
  REQUIRE(four.kind == FiniteTree::Kind::Plus);
  CHECK(four.children[0].children[0].state == S("{x=1}"));
  CHECK(four.children[1].children[0].state == S("{x=2}"));
}

TEST_CASE("render and structured output") {
  Res r = res_plus(delays(2, res_ret(S("{x=1}"))),
                   res_delay(res_yield(P("x := 2"), S("{x=0}"))));
  CHECK(render(prefix(r, 10)) == "(δ^2 ret {x=1} + δ yield ⟨x := 2⟩ {x=0})");
  auto j = to_json(prefix(r, 10));
  CHECK(j["kind"] == "plus");
  CHECK(j["children"][0]["kind"] == "delay");
  CHECK(j["children"][0]["children"][0]["children"][0]["state"]["x"] == 1);
  CHECK(j["children"][1]["children"][0]["stmt"] == "x := 2");
}

TEST_CASE("has_yield and yields_within agree with the prefix") {
  for (const auto& e : gen_corpus(5, 120, 12)) {
    for (const State& st : corpus_states()) {
      Res r = eval(e.program, st);
      for (std::size_t d : {3u, 20u}) {
        FiniteTree t = prefix(r, d);
        CHECK(has_yield(r, d) == t.has_yield());
        CHECK(yields_within(r, d).empty() == !t.has_yield());
      }
    }
  }
}

TEST_CASE("sharing scope does not change results") {
  for (const auto& e : gen_corpus(9, 80, 12)) {
    State st = S("{x=3, y=0}");
    FiniteTree plain = prefix(close(eval(e.program, st)), 40);
    FiniteTree shared;
    {
      SharingScope scope;
      shared = prefix(close(eval(e.program, st)), 40);
    }
    CHECK(plain == shared);
  }
}
