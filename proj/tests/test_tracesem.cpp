#include "cosem/bigstep.hpp"
#include "cosem/corpus.hpp"
#include "cosem/giantstep.hpp"
#include "cosem/tracesem.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cosem;
using namespace cosem::test;

namespace {
const char* kEx1 = "x := 1 || (x := x+2; x := x+2)";
std::string tshow(const Trace& t, std::size_t d = 60) { return render(prefix(t, d)); }
std::string gtshow(const GTrace& t, std::size_t d = 60) { return render(prefix(t, d)); }

Trace tret(State st) { return Trace::ready(trace::Ret{std::move(st)}); }
Trace tdelay(Trace t) { return Trace::ready(trace::Delay{std::move(t)}); }
Trace tyield(StmtPtr s, State st) { return Trace::ready(trace::Yield{std::move(s), std::move(st)}); }

std::vector<Schedule> all_schedules(std::size_t max_len) {
  std::vector<Schedule> out{Schedule()};
  std::vector<std::vector<Choice>> layer{{}};
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<std::vector<Choice>> next;
    for (const auto& p : layer)
      for (Choice c : {Choice::L, Choice::R}) {
        auto q = p;
        q.push_back(c);
        out.emplace_back(q);
        next.push_back(std::move(q));
      }
    layer = std::move(next);
  }
  return out;
}
}  // namespace

TEST_CASE("schedules and resume oracles") {
  Schedule s = Schedule::parse("LR");
  CHECK(s.next() == Choice::L);
  CHECK(s.next() == Choice::R);
  CHECK(s.next() == Choice::L);
  CHECK(s.consumed() == 3);
  Schedule c = Schedule::parse("R*");
  for (int i = 0; i < 5; ++i) CHECK(c.next() == Choice::R);
  CHECK(Schedule::parse("LRL*").to_string() == "LRL*");
  CHECK(Schedule().next() == Choice::L);
  CHECK_THROWS(Schedule::parse("LX"));

  ResumeOracle o = ResumeOracle::parse("{x=0}; {x=3}");
  CHECK(o.next(S("{x=9}")) == S("{x=0}"));
  CHECK(o.next(S("{x=9}")) == S("{x=3}"));
  CHECK(o.next(S("{x=9}")) == S("{x=9}"));
}

TEST_CASE("trace_eval picks summands") {
  CHECK(tshow(trace_eval(Stmt::skip(), S("{x=1}"), Schedule())) == "ret {x=1}");
  CHECK(tshow(trace_eval(P(kEx1), S("{x=0}"), Schedule::parse("L"))) ==
        "δ yield ⟨x := x+2; x := x+2⟩ {x=1}");
  CHECK(tshow(trace_eval(P(kEx1), S("{x=0}"), Schedule::parse("R"))) ==
        "δ yield ⟨x := 1 || x := x+2⟩ {x=2}");
  CHECK(tshow(trace_eval(P(std::string("atomic {") + kEx1 + "}"), S("{x=0}"),
                         Schedule::parse("RL"))) == "δ^5 ret {x=3}");
}

TEST_CASE("trace_eval is total on a spinning program") {
  Trace t = trace_eval(P("while true do x := x+1 od || y := 1"), State(), Schedule::parse("LR*"));
  CHECK(prefix(t, 500).depth() <= 500);
}

TEST_CASE("close_trace") {
  CHECK(tshow(close_trace(tret(S("{x=1}")), Schedule())) == "ret {x=1}");
  CHECK(tshow(close_trace(tdelay(tyield(P("x := x+2"), S("{x=1}"))), Schedule())) ==
        "δ^3 ret {x=3}");
  Trace free = trace_eval(P("atomic { x := 1; y := x }"), State(), Schedule());
  CHECK(prefix(close_trace(free, Schedule()), 60) == prefix(free, 60));
}

TEST_CASE("is_path_of") {
  State st = S("{x=1}");
  CHECK(is_path_of(tret(st), res_ret(st), 5));
  CHECK(is_path_of(tdelay(tyield(P("x := x+2; x := x+2"), st)), eval(P(kEx1), S("{x=0}")), 10));
  CHECK_FALSE(is_path_of(tret(st), res_delay(res_ret(st)), 10));
  CHECK_FALSE(is_path_of(tdelay(tyield(P("x := x+2"), st)), eval(P(kEx1), S("{x=0}")), 10));
}

TEST_CASE("soundness and completeness on a corpus sample") {
  auto schedules = all_schedules(4);
  for (const auto& e : gen_corpus(61, 40, 10)) {
    State st = S("{x=1, y=2}");
    Res r = eval(e.program, st);
    // re-parse for a fresh cursor per run
    for (const auto& sched : schedules)
      CHECK(is_path_of(trace_eval(e.program, st, Schedule::parse(sched.to_string())), r, 60));
    for (const auto& choices : plus_paths(r, 5))
      CHECK(follows(trace_eval(e.program, st, Schedule(choices)), r, choices, 5));
  }
}

TEST_CASE("trace_eval_g") {
  CHECK(gtshow(trace_eval_g(Stmt::skip(), S("{x=1}"), Schedule(), ResumeOracle())) ==
        "ret {x=1}");
  GTrace t = trace_eval_g(P("await x=0 then x:=1"), S("{x=2}"), Schedule(),
                          ResumeOracle::parse("{x=0}"));
  CHECK(gtshow(t) == "δ yield {x=2} [σ′={x=0} ↦ δ^2 ret {x=1}]");
  CHECK(is_path_of_g(t, eval_g(P("await x=0 then x:=1"), S("{x=2}")), 60));
}

TEST_CASE("giant-step traces project onto eval_g") {
  auto oracles = {"", "{}", "{x=0}; {x=1, y=1}", "{x=3}; {}; {y=2}"};
  for (const auto& e : gen_corpus(67, 40, 10)) {
    State st = S("{x=3, y=0}");
    GRes g = eval_g(e.program, st);
    for (const char* sch : {"", "R", "RL", "LRR"})
      for (const char* o : oracles)
        CHECK(is_path_of_g(trace_eval_g(e.program, st, Schedule::parse(sch), ResumeOracle::parse(o)),
                           g, 40));
  }
}

TEST_CASE("close_trace_g") {
  GTrace same = trace_eval_g(P("x := 1; x := 2"), State(), Schedule(), ResumeOracle());
  CHECK(gtshow(close_trace_g(same)) == "δ^3 ret {x=2}");
  GTrace moved = trace_eval_g(P("await x=0 then x:=1"), S("{x=2}"), Schedule(),
                              ResumeOracle::parse("{x=0}"));
  FiniteTree t = prefix(close_trace_g(moved), 10);
  REQUIRE(t.kind == FiniteTree::Kind::Delay);
  CHECK(t.children[0].kind == FiniteTree::Kind::Stuck);
  CHECK(t.children[0].note.find("{x=0}") != std::string::npos);
}
