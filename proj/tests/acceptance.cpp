// End-to-end acceptance checks. Usage: acceptance <clpv-binary> <programs-dir>
// Prints one PASS/FAIL line per criterion; the exit code is the number of
// failures.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "clpv/combinators.hpp"
#include "clpv/infer.hpp"
#include "clpv/refute.hpp"
#include "oracle.hpp"

using namespace clpv;

namespace {

std::string g_clpv;
std::string g_programs;

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  CliResult r;
  std::string cmd = g_clpv + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string program_path(const std::string& name) {
  return g_programs + "/" + name;
}

ProgramAst load(const std::string& name) {
  return parse_program(read_file(program_path(name)));
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<std::vector<Val>> parse_suite_rows(const std::string& path) {
  std::vector<std::vector<Val>> rows;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::vector<Val> row;
    Val v;
    while (is >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::ofstream out(name);
  out << text;
  return name;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

// ---------------------------------------------------------------------------

// run foo.mc 5 3 prints 4; the compiled network propagates RET=4 with no
// search.
bool criterion1(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  CliResult cli = run_cli("run " + program_path("foo.mc") + " 5 3");
  if (cli.exit_code != 0 || lines_of(cli.out) != std::vector<std::string>{"4"}) {
    detail = "cli printed '" + cli.out + "' (exit " +
             std::to_string(cli.exit_code) + ")";
    return false;
  }
  CompiledProgram cp = compile(to_ssa(load("foo.mc")), IntWidth(8), 300);
  cp.store->post(Constraint::cmp(CmpOp::Eq, Term::v(cp.inputs[0]),
                                 Term::c(5)));
  cp.store->post(Constraint::cmp(CmpOp::Eq, Term::v(cp.inputs[1]),
                                 Term::c(3)));
  cp.store->propagate();
  double el = seconds_since(t0);
  if (cp.store->failed() || !cp.store->domain(cp.output).is_singleton() ||
      cp.store->domain(cp.output).value() != 4) {
    detail = "propagation did not pin RET to 4";
    return false;
  }
  if (cp.store->stats().label_nodes != 0) {
    detail = "labeling was used";
    return false;
  }
  if (el >= 1.0) {
    detail = "too slow: " + std::to_string(el) + "s";
    return false;
  }
  std::ostringstream os;
  os << "run prints 4; propagation alone pins RET=4 in " << el << "s";
  detail = os.str();
  return true;
}

// orig(r) == 0 ==> return == 0 is disproved with a confirmed counter-example.
bool criterion2(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ProgramAst ast = load("foo.mc");
  InvariantPtr f = parse_invariant("orig(r) == 0 ==> return == 0");
  CheckConfig cfg;
  Verdict v = check_invariant(ast, f, cfg);
  double el = seconds_since(t0);
  if (v.kind != Verdict::Kind::Disproved || !v.interpreter_confirmed) {
    detail = "expected an interpreter-confirmed Disproved";
    return false;
  }
  if (v.counter_inputs.at("r") != 0 || v.counter_output == 0) {
    detail = "counter-example does not satisfy r=0, return!=0";
    return false;
  }
  RunResult rr = run(ast, {{"n", 1}, {"r", 0}}, IntWidth(8));
  Trace instance;
  instance.entry = {{"n", 1}, {"r", 0}};
  instance.exit_return = rr.value;
  if (!rr.returned() || rr.value != 1 || evaluate_invariant(f, instance)) {
    detail = "the instance n=1, r=0 -> 1 did not confirm as violating";
    return false;
  }
  if (el >= 5.0) {
    detail = "too slow: " + std::to_string(el) + "s";
    return false;
  }
  std::ostringstream os;
  os << "disproved with n=" << v.counter_inputs.at("n") << ", r=0 -> "
     << v.counter_output << " in " << el << "s";
  detail = os.str();
  return true;
}

// R0=0 and RET!=0 propagate to RET = [MIN,-1] u [1,MAX] with N0 untouched.
bool criterion3(std::string& detail) {
  CompiledProgram cp = compile(to_ssa(load("foo.mc")), IntWidth(8), 300);
  cp.store->post(Constraint::cmp(CmpOp::Eq, Term::v(cp.inputs[1]),
                                 Term::c(0)));
  cp.store->post(Constraint::cmp(CmpOp::Ne, Term::v(cp.output), Term::c(0)));
  cp.store->propagate();
  if (cp.store->failed()) {
    detail = "store failed";
    return false;
  }
  const Domain& ret = cp.store->domain(cp.output);
  const Domain& n0 = cp.store->domain(cp.inputs[0]);
  if (ret.intervals().size() != 2 || ret.min() != -128 || ret.max() != 127 ||
      ret.contains(0)) {
    detail = "RET is " + ret.to_string();
    return false;
  }
  if (n0.size() != 256) {
    detail = "N0 is " + n0.to_string();
    return false;
  }
  detail = "RET = [inf,-1] u [1,sup], N0 full range";
  return true;
}

// return == 0 ==> orig(r) == 0 is disproved; n=1, r=-1 -> 0 confirms.
bool criterion4(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ProgramAst ast = load("foo.mc");
  InvariantPtr f = parse_invariant("return == 0 ==> orig(r) == 0");
  Verdict v = check_invariant(ast, f, CheckConfig{});
  double el = seconds_since(t0);
  if (v.kind != Verdict::Kind::Disproved || !v.interpreter_confirmed) {
    detail = "expected an interpreter-confirmed Disproved";
    return false;
  }
  RunResult rr = run(ast, {{"n", 1}, {"r", -1}}, IntWidth(8));
  Trace instance;
  instance.entry = {{"n", 1}, {"r", -1}};
  instance.exit_return = rr.value;
  if (!rr.returned() || rr.value != 0 || evaluate_invariant(f, instance)) {
    detail = "the instance n=1, r=-1 -> 0 did not confirm as violating";
    return false;
  }
  if (el >= 5.0) {
    detail = "too slow: " + std::to_string(el) + "s";
    return false;
  }
  std::ostringstream os;
  os << "disproved with n=" << v.counter_inputs.at("n") << ", r="
     << v.counter_inputs.at("r") << " -> " << v.counter_output << " in " << el
     << "s";
  detail = os.str();
  return true;
}

// return >= orig(r) is proved with no search and exactly 127 unfoldings.
bool criterion5(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ProgramAst ast = load("foo.mc");
  Verdict v =
      check_invariant(ast, parse_invariant("return >= orig(r)"), CheckConfig{});
  double el = seconds_since(t0);
  if (v.kind != Verdict::Kind::Proved) {
    detail = "not proved";
    return false;
  }
  if (v.stats.label_nodes != 0) {
    detail = "labeling was used: " + std::to_string(v.stats.label_nodes) +
             " nodes";
    return false;
  }
  if (v.stats.unfoldings != 127) {
    detail = "unfoldings = " + std::to_string(v.stats.unfoldings) +
             ", expected 127";
    return false;
  }
  if (el >= 30.0) {
    detail = "too slow: " + std::to_string(el) + "s";
    return false;
  }
  std::ostringstream os;
  os << "proved, 127 unfoldings, 0 label nodes, " << el << "s";
  detail = os.str();
  return true;
}

// An open conditional assigning 1 / 3 leaves the join at exactly {1,3}.
bool criterion6(std::string& detail) {
  ConstraintStore s(IntWidth(8));
  VarId c = s.new_var("C");
  VarId x0 = s.new_var("X0"), x1 = s.new_var("X1"), x2 = s.new_var("X2");
  BranchTemplate then_t{[](ConstraintStore& st, const std::vector<VarId>& f) {
    st.post(Constraint::cmp(CmpOp::Eq, Term::v(f[0]), Term::c(1)));
  }};
  BranchTemplate else_t{[](ConstraintStore& st, const std::vector<VarId>& f) {
    st.post(Constraint::cmp(CmpOp::Eq, Term::v(f[0]), Term::c(3)));
  }};
  post_ite(s, Constraint::cmp(CmpOp::Gt, Term::v(c), Term::c(0)), {x0}, {x1},
           {x2}, then_t, else_t);
  s.propagate();
  const Domain& d = s.domain(x2);
  if (s.failed() || d.size() != 2 || !d.contains(1) || !d.contains(3)) {
    detail = "X2 is " + d.to_string();
    return false;
  }
  detail = "X2 = {1} u {3}";
  return true;
}

// infer over the checked-in suite reproduces the three known invariants.
bool criterion7(std::string& detail) {
  std::string suite = program_path("suite25.txt");
  std::vector<std::vector<Val>> rows = parse_suite_rows(suite);
  if (rows.size() < 25) {
    detail = "suite has only " + std::to_string(rows.size()) + " rows";
    return false;
  }
  CliResult cli =
      run_cli("infer " + program_path("foo.mc") + " " + suite + " --width 16");
  if (cli.exit_code != 0) {
    detail = "infer exited " + std::to_string(cli.exit_code);
    return false;
  }
  std::vector<std::string> out = lines_of(cli.out);
  std::set<std::string> got(out.begin(), out.end());
  if (!got.count("orig(r) == 0 ==> return == 0") ||
      !got.count("return == 0 ==> orig(r) == 0") ||
      (!got.count("orig(r) <= return") && !got.count("return >= orig(r)"))) {
    detail = "missing one of the three expected invariants";
    return false;
  }
  // every reported invariant must hold on every trace of the suite
  ProgramAst ast = load("foo.mc");
  std::vector<Trace> traces = run_suite(ast, rows, IntWidth(16));
  for (const std::string& line : out) {
    InvariantPtr f = parse_invariant(line);
    for (const Trace& t : traces) {
      if (!evaluate_invariant(f, t)) {
        detail = "'" + line + "' fails on a trace";
        return false;
      }
    }
  }
  detail = std::to_string(out.size()) + " invariants, all three targets " +
           "included, all hold on all " + std::to_string(traces.size()) +
           " traces";
  return true;
}

// check over the three inferred invariants: {Disproved, Disproved, Proved}.
bool criterion8(std::string& detail) {
  std::string invs = write_temp(
      "acceptance_invs.txt",
      "orig(r) == 0 ==> return == 0\n"
      "return == 0 ==> orig(r) == 0\n"
      "orig(r) <= return\n");
  CliResult cli =
      run_cli("check " + program_path("foo.mc") + " " + invs + " --jobs 3");
  std::remove(invs.c_str());
  int disproved = 0, proved = 0, other = 0;
  for (const std::string& line : lines_of(cli.out)) {
    if (starts_with(line, "disproved:")) {
      ++disproved;
    } else if (starts_with(line, "proved:")) {
      ++proved;
    } else {
      ++other;
    }
  }
  if (disproved != 2 || proved != 1 || other != 0) {
    detail = "verdicts were: " + cli.out;
    return false;
  }
  if (cli.exit_code != 4) {
    detail = "exit code " + std::to_string(cli.exit_code) + ", expected 4";
    return false;
  }
  detail = "{disproved, disproved, proved}, exit 4";
  return true;
}

// Exhaustive equivalence at width 4: network graph == interpreter graph, and
// every pool invariant's verdict matches brute force.
bool criterion9(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  const char* programs[] = {"foo.mc",     "absval.mc",   "signs.mc",
                            "sumto.mc",   "twoloops.mc", "decdiv.mc"};
  IntWidth w(4);
  int graphs = 0, checked = 0;
  for (const char* name : programs) {
    ProgramAst ast = load(name);
    auto got = solution_graph(to_ssa(ast), w);
    auto want = oracle::interp_graph(ast, w);
    std::map<std::vector<Val>, Val> got_map(got.begin(), got.end());
    if (got_map != want) {
      detail = std::string(name) + ": network graph differs from the " +
               "interpreter graph";
      return false;
    }
    ++graphs;

    // invariant pool from a thinned trace set, verdicts vs. brute force
    std::vector<Trace> all = oracle::all_traces(ast, w);
    std::vector<Trace> sample;
    std::size_t stride = all.size() > 8 ? all.size() / 8 : 1;
    for (std::size_t i = 0; i < all.size(); i += stride) {
      sample.push_back(all[i]);
    }
    CheckConfig cfg;
    cfg.width = w;
    for (const InvariantPtr& f : infer_invariants(sample)) {
      bool truth = true;
      for (const Trace& t : all) {
        if (!evaluate_invariant(f, t)) {
          truth = false;
          break;
        }
      }
      Verdict v = check_invariant(ast, f, cfg);
      bool ok = (truth && v.kind == Verdict::Kind::Proved) ||
                (!truth && v.kind == Verdict::Kind::Disproved);
      if (!ok) {
        detail = std::string(name) + ": verdict mismatch on '" + to_string(f) +
                 "' (truth=" + (truth ? "holds" : "violated") + ")";
        return false;
      }
      ++checked;
    }
  }
  double el = seconds_since(t0);
  if (el >= 300.0) {
    detail = "too slow: " + std::to_string(el) + "s";
    return false;
  }
  std::ostringstream os;
  os << graphs << " graphs equal, " << checked
     << " pool verdicts match brute force, " << el << "s";
  detail = os.str();
  return true;
}

// Budget degradation: never a wrong verdict, only weaker ones.
bool criterion10(std::string& detail) {
  std::string inv3 = write_temp("acceptance_inv3.txt", "return >= orig(r)\n");
  CliResult a = run_cli("check " + program_path("foo.mc") + " " + inv3 +
                        " --max-unfold 10");
  std::remove(inv3.c_str());
  bool a_unknown = false, a_bad = false;
  for (const std::string& line : lines_of(a.out)) {
    if (starts_with(line, "unknown(UnfoldBudget)")) a_unknown = true;
    if (starts_with(line, "disproved:")) a_bad = true;
  }
  if (!a_unknown || a_bad) {
    detail = "--max-unfold 10 gave: " + a.out;
    return false;
  }

  std::string inv1 =
      write_temp("acceptance_inv1.txt", "orig(r) == 0 ==> return == 0\n");
  CliResult b = run_cli("check " + program_path("foo.mc") + " " + inv1 +
                        " --label-budget 1");
  std::remove(inv1.c_str());
  bool b_proved = false, b_ok = false;
  for (const std::string& line : lines_of(b.out)) {
    if (starts_with(line, "proved:")) b_proved = true;
    if (starts_with(line, "unknown(") || starts_with(line, "disproved:")) {
      b_ok = true;
    }
  }
  if (b_proved || !b_ok) {
    detail = "--label-budget 1 gave: " + b.out;
    return false;
  }
  detail = "unfold cut -> Unknown(UnfoldBudget); label cut never proves";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <clpv-binary> <programs-dir>\n";
    return 2;
  }
  g_clpv = argv[1];
  g_programs = argv[2];

  using Criterion = std::function<bool(std::string&)>;
  const std::pair<const char*, Criterion> criteria[] = {
      {"forward execution", criterion1},
      {"first invariant disproved", criterion2},
      {"propagation shape", criterion3},
      {"second invariant disproved", criterion4},
      {"third invariant proved", criterion5},
      {"conditional union pruning", criterion6},
      {"inference reproduction", criterion7},
      {"end-to-end triple", criterion8},
      {"oracle equivalence", criterion9},
      {"verdict degradation", criterion10},
  };

  int failures = 0;
  int num = 0;
  for (const auto& [name, fn] : criteria) {
    ++num;
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << "criterion " << num << " (" << name << "): "
              << (ok ? "PASS" : "FAIL") << " - " << detail << "\n";
    std::cout.flush();
  }
  return failures;
}
