// cosem: evaluate, compare and differentially test the semantics.

#include "cosem/bigstep.hpp"
#include "cosem/corpus.hpp"
#include "cosem/equiv.hpp"
#include "cosem/giantstep.hpp"
#include "cosem/smallstep.hpp"
#include "cosem/tracesem.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace cosem;

namespace {

enum Exit { kOk = 0, kFails = 1, kUnknown = 2, kUsage = 3 };

struct Common {
  std::string source;
  std::string file;
  std::string init = "{}";
  std::string mode = "preempt";
  std::string probes;
  std::size_t depth = 12;
  std::string format = "text";
  bool quiet = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SchedMode mode_of(const std::string& m) {
  return m == "coop" ? SchedMode::Cooperative : SchedMode::Preemptive;
}

std::string read_program(const std::string& source, const std::string& file) {
  if (!source.empty() && !file.empty()) throw UsageError("give either -e or --file, not both");
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (source.empty()) throw UsageError("no program given (use -e or --file)");
  return source;
}

std::vector<State> parse_states(const std::string& text) {
  std::vector<State> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';'))
    if (part.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_state(part));
  return out;
}

void warn_unassigned(const Stmt& s, const State& init) {
  for (const auto& v : unassigned_reads(s))
    if (!init.contains(v))
      std::cerr << "warning: " << v << " is read but never assigned or initialized (reads as 0)\n";
}

std::vector<State> probes_for(const Common& c, const Stmt& s, const State& init) {
  if (!c.probes.empty()) {
    auto p = parse_states(c.probes);
    if (p.empty()) throw UsageError("--probes: no states");
    return p;
  }
  auto vars = variables(s);
  for (const auto& [k, v] : init.vars()) vars.insert(k);
  return default_probes(vars, init);
}

void emit(const Common& c, const FiniteTree& t) {
  if (c.quiet) return;
  if (c.format == "structured")
    std::cout << to_json(t).dump(2) << "\n";
  else
    std::cout << render(t) << "\n";
}

int verdict_exit(const Verdict& v, bool quiet) {
  if (!quiet) std::cout << render(v) << "\n";
  if (v.is_holds()) return kOk;
  return v.is_fails() ? kFails : kUnknown;
}

// --- eval -------------------------------------------------------------------

struct EvalOpts {
  Common c;
  std::string sem = "big";
  std::string schedule;
  std::string resume;
  bool close = false;
};

int run_eval(const EvalOpts& o) {
  StmtPtr s = parse(read_program(o.c.source, o.c.file));
  State init = parse_state(o.c.init);
  SchedMode mode = mode_of(o.c.mode);
  warn_unassigned(*s, init);
  const std::size_t d = o.c.depth;
  if (o.sem == "big") {
    Res r = eval(s, init, mode);
    emit(o.c, prefix(o.close ? close(r, mode) : r, d));
  } else if (o.sem == "small") {
    emit(o.c, prefix(mmred(s, init, mode), d));
  } else if (o.sem == "giant" || o.sem == "small-giant") {
    GRes r = o.sem == "giant" ? eval_g(s, init, mode) : gmmred(s, init, mode);
    if (o.close) r = close_g(r, mode);
    emit(o.c, prefix_g(r, d, probes_for(o.c, *s, init)));
  } else if (o.sem == "trace") {
    Schedule sched = Schedule::parse(o.schedule);
    Trace t = trace_eval(s, init, sched, mode);
    emit(o.c, prefix(o.close ? close_trace(t, sched, mode) : t, d));
  } else {
    Schedule sched = Schedule::parse(o.schedule);
    GTrace t = trace_eval_g(s, init, sched, ResumeOracle::parse(o.resume), mode);
    emit(o.c, prefix(o.close ? close_trace_g(t) : t, d));
  }
  return kOk;
}

// --- compare / bisim ----------------------------------------------------------

struct CompareOpts {
  Common c;
  std::string left = "big";
  std::string right = "small";
  std::string sem = "big";
  std::string equiv = "strong";
  std::string other_source;
  std::string other_file;
  std::size_t fuel = 1000;
};

bool is_giant(const std::string& sem) { return sem == "giant" || sem == "small-giant"; }

Res res_of(const std::string& sem, const StmtPtr& s, const State& init, SchedMode mode) {
  return sem == "big" ? eval(s, init, mode) : mmred(s, init, mode);
}

GRes gres_of(const std::string& sem, const StmtPtr& s, const State& init, SchedMode mode) {
  return sem == "giant" ? eval_g(s, init, mode) : gmmred(s, init, mode);
}

Verdict compare_sems(const CompareOpts& o, const std::string& lsem, const StmtPtr& ls,
                     const std::string& rsem, const StmtPtr& rs) {
  State init = parse_state(o.c.init);
  SchedMode mode = mode_of(o.c.mode);
  if (is_giant(lsem) != is_giant(rsem))
    throw UsageError("cannot compare a giant-step resumption with a big-step one");
  if (is_giant(lsem)) {
    if (o.equiv == "weak") throw UsageError("weak bisimilarity is defined for big-step resumptions only");
    auto probes = probes_for(o.c, *ls, init);
    if (ls != rs)
      for (const auto& p : probes_for(o.c, *rs, init))
        if (std::find(probes.begin(), probes.end(), p) == probes.end()) probes.push_back(p);
    return strong_bisim_g(gres_of(lsem, ls, init, mode), gres_of(rsem, rs, init, mode),
                          o.c.depth, probes);
  }
  StmtEq eq;
  if (mode == SchedMode::Cooperative) eq = equal_modulo_skip_unit;
  Res a = res_of(lsem, ls, init, mode);
  Res b = res_of(rsem, rs, init, mode);
  if (o.equiv == "weak") return weak_bisim(a, b, o.c.depth, o.fuel, eq);
  return strong_bisim(a, b, o.c.depth, eq);
}

int run_compare(const CompareOpts& o) {
  StmtPtr s = parse(read_program(o.c.source, o.c.file));
  warn_unassigned(*s, parse_state(o.c.init));
  return verdict_exit(compare_sems(o, o.left, s, o.right, s), o.c.quiet);
}

int run_bisim(const CompareOpts& o) {
  StmtPtr a = parse(read_program(o.c.source, o.c.file));
  StmtPtr b = parse(read_program(o.other_source, o.other_file));
  return verdict_exit(compare_sems(o, o.sem, a, o.sem, b), o.c.quiet);
}

// --- corpus -------------------------------------------------------------------

struct CorpusOpts {
  std::uint64_t seed = 42;
  std::size_t count = 500;
  std::size_t max_size = 12;
  std::string mode = "preempt";
  unsigned threads = 0;
  bool list = false;
  bool quiet = false;
};

struct Tally {
  std::atomic<std::size_t> holds{0}, fails{0}, unknown{0};
  std::mutex m;
  std::vector<std::string> failures;

  void add(const Verdict& v, const std::string& what) {
    if (v.is_holds()) {
      ++holds;
    } else if (v.is_fails()) {
      ++fails;
      std::lock_guard<std::mutex> lock(m);
      failures.push_back(what + ": " + render(v));
    } else {
      ++unknown;
    }
  }
};

int run_corpus(const CorpusOpts& o) {
  auto corpus = gen_corpus(o.seed, o.count, o.max_size);
  if (o.list) {
    for (const auto& e : corpus) std::cout << pretty(*e.program) << "\n";
    return kOk;
  }
  SchedMode mode = mode_of(o.mode);
  StmtEq eq;
  if (mode == SchedMode::Cooperative) eq = equal_modulo_skip_unit;
  auto states = corpus_states();

  Tally big_small, giant_small, coherence, closing;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      const StmtPtr& s = corpus[i].program;
      std::string tag = "#" + std::to_string(i) + " " + pretty(*s);
      for (const auto& st : states) {
        SharingScope scope;
        std::string where = tag + " from " + st.to_string();
        big_small.add(strong_bisim(eval(s, st, mode), mmred(s, st, mode), 60, eq), where);
        if (i < 200) {
          giant_small.add(strong_bisim_g(eval_g(s, st, mode), gmmred(s, st, mode), 40,
                                         default_probes(variables(*s), st)),
                          where);
          StmtPtr at = Stmt::atomic(s);
          coherence.add(strong_bisim(eval(at, st, mode), flatten(eval_g(at, st, mode)), 60), where);
        }
        bool yields = has_yield(close(eval(s, st, mode), mode), 60);
        closing.add(yields ? Verdict::fails({}, "yield survives closing") : Verdict::holds(60), where);
      }
    }
  };
  unsigned n = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  auto line = [&](const char* name, const Tally& t) {
    if (o.quiet) return;
    std::cout << name << ": " << t.holds << " hold, " << t.fails << " fail, " << t.unknown
              << " unknown\n";
    for (const auto& f : t.failures) std::cout << "  " << f << "\n";
  };
  line("big ~ small", big_small);
  line("giant ~ small", giant_small);
  line("atomic coherence", coherence);
  line("closing", closing);
  std::size_t fails = big_small.fails + giant_small.fails + coherence.fails + closing.fails;
  std::size_t unknown =
      big_small.unknown + giant_small.unknown + coherence.unknown + closing.unknown;
  if (fails) return kFails;
  return unknown ? kUnknown : kOk;
}

void add_common(CLI::App* cmd, Common& c, bool program = true) {
  if (program) {
    cmd->add_option("-e,--expr", c.source, "Program text");
    cmd->add_option("--file", c.file, "Program file");
  }
  cmd->add_option("--init", c.init, "Initial state, e.g. '{x=0}'");
  cmd->add_option("--mode", c.mode, "Scheduling mode")->check(CLI::IsMember({"preempt", "coop"}));
  cmd->add_option("--depth", c.depth, "Observation depth");
  cmd->add_option("--probes", c.probes, "';'-separated probe states for continuations");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
  cmd->add_flag("-q,--quiet", c.quiet, "Report through the exit code only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coinductive semantics workbench"};
  app.require_subcommand(1);

  EvalOpts eo;
  auto* ev = app.add_subcommand("eval", "Evaluate a program and print its resumption");
  add_common(ev, eo.c);
  ev->add_option("--sem", eo.sem, "Semantics")
      ->check(CLI::IsMember({"big", "giant", "small", "small-giant", "trace", "trace-giant"}));
  ev->add_option("--schedule", eo.schedule, "Trace schedule, e.g. LR or LR*");
  ev->add_option("--resume", eo.resume, "Giant-step trace resume states, ';'-separated");
  ev->add_flag("--close", eo.close, "Close the result");

  CompareOpts co;
  auto* cmp = app.add_subcommand("compare", "Compare two semantics of one program");
  add_common(cmp, co.c);
  co.c.depth = 60;
  cmp->add_option("--left", co.left, "Left semantics")
      ->check(CLI::IsMember({"big", "small", "giant", "small-giant"}));
  cmp->add_option("--right", co.right, "Right semantics")
      ->check(CLI::IsMember({"big", "small", "giant", "small-giant"}));
  cmp->add_option("--equiv", co.equiv, "Equivalence")->check(CLI::IsMember({"strong", "weak"}));
  cmp->add_option("--fuel", co.fuel, "Convergence fuel");

  CompareOpts bo;
  auto* bis = app.add_subcommand("bisim", "Compare two programs under one semantics");
  add_common(bis, bo.c, false);
  bo.c.depth = 60;
  bis->add_option("-a", bo.c.source, "First program");
  bis->add_option("-b", bo.other_source, "Second program");
  bis->add_option("--file-a", bo.c.file, "First program file");
  bis->add_option("--file-b", bo.other_file, "Second program file");
  bis->add_option("--sem", bo.sem, "Semantics")
      ->check(CLI::IsMember({"big", "small", "giant", "small-giant"}));
  bis->add_option("--equiv", bo.equiv, "Equivalence")->check(CLI::IsMember({"strong", "weak"}));
  bis->add_option("--fuel", bo.fuel, "Convergence fuel");

  CorpusOpts po;
  auto* cor = app.add_subcommand("corpus", "Generate a corpus and run the differential suite");
  cor->add_option("--seed", po.seed);
  cor->add_option("--count", po.count)->check(CLI::PositiveNumber);
  cor->add_option("--max-size", po.max_size)->check(CLI::PositiveNumber);
  cor->add_option("--mode", po.mode)->check(CLI::IsMember({"preempt", "coop"}));
  cor->add_option("--threads", po.threads);
  cor->add_flag("--list", po.list, "Print the programs instead of checking them");
  cor->add_flag("-q,--quiet", po.quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    SharingScope scope;
    if (*ev) return run_eval(eo);
    if (*cmp) return run_compare(co);
    if (*bis) return run_bisim(bo);
    return run_corpus(po);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
