#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "clpv/compile.hpp"
#include "clpv/infer.hpp"
#include "clpv/interp.hpp"
#include "clpv/refute.hpp"
#include "clpv/ssa.hpp"

namespace {

using clpv::Val;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitFault = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDisproved = 4;
constexpr int kExitUnknown = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

clpv::ProgramAst parse_or_exit(const std::string& path) {
  try {
    return clpv::parse_program(read_file(path));
  } catch (const clpv::ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    std::exit(kExitParse);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(kExitParse);
  }
}

/// Input rows: one whitespace-separated integer vector per line; blank
/// lines and lines starting with '#' are skipped.
std::vector<std::vector<Val>> parse_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<Val>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<Val> row;
    Val v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw std::runtime_error(path + ": bad input row: " + line);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

void emit_dump(const clpv::ProgramAst& ast, const std::string& what) {
  if (what == "ast") {
    std::cout << clpv::pretty_print(ast);
  } else if (what == "ssa") {
    std::cout << clpv::pretty_print_ssa(clpv::to_ssa(ast));
  } else if (what == "clp") {
    std::cout << clpv::emit_clp(clpv::to_ssa(ast));
  }
}

int cmd_run(const std::string& file, const std::vector<Val>& inputs,
            int width_bits, std::uint64_t step_budget,
            const std::string& emit) {
  clpv::ProgramAst ast = parse_or_exit(file);
  if (emit != "none") {
    emit_dump(ast, emit);
    if (inputs.empty()) return kExitOk;
  }
  if (inputs.size() != ast.params.size()) {
    std::cerr << "error: " << ast.name << " takes " << ast.params.size()
              << " input(s), got " << inputs.size() << "\n";
    return kExitParse;
  }
  std::map<std::string, Val> named;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    named[ast.params[i]] = inputs[i];
  }
  clpv::RunResult r;
  try {
    r = clpv::run(ast, named, clpv::IntWidth(width_bits), step_budget);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  switch (r.status) {
    case clpv::RunResult::Status::Returned:
      std::cout << r.value << "\n";
      return kExitOk;
    case clpv::RunResult::Status::Fault:
      std::cerr << "fault: "
                << (r.fault == clpv::FaultKind::Overflow ? "overflow"
                                                         : "division by zero")
                << " (" << r.fault_where << ")\n";
      return kExitFault;
    case clpv::RunResult::Status::DivergedAtBudget:
      std::cerr << "budget: no result within " << step_budget << " steps\n";
      return kExitBudget;
  }
  return kExitFault;
}

int cmd_infer(const std::string& file, const std::string& suite_path,
              int width_bits, std::uint64_t step_budget,
              const std::string& traces_out) {
  clpv::ProgramAst ast = parse_or_exit(file);
  std::vector<std::vector<Val>> rows;
  try {
    rows = parse_suite(suite_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  clpv::IntWidth width(width_bits);
  std::vector<clpv::Trace> traces;
  bool any_diverged = false, any_faulted = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ast.params.size()) {
      std::cerr << "error: case " << i + 1 << " has " << rows[i].size()
                << " value(s), expected " << ast.params.size() << "\n";
      return kExitParse;
    }
    std::map<std::string, Val> named;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      named[ast.params[j]] = rows[i][j];
    }
    clpv::RunResult r;
    try {
      r = clpv::run(ast, named, width, step_budget);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: case " << i + 1 << ": " << e.what() << "\n";
      return kExitParse;
    }
    if (r.returned()) {
      traces.push_back(std::move(r.trace));
    } else if (r.status == clpv::RunResult::Status::Fault) {
      any_faulted = true;
      std::cerr << "warning: case " << i + 1 << " faulted; excluded\n";
    } else {
      any_diverged = true;
      std::cerr << "warning: case " << i + 1
                << " exceeded the step budget; excluded\n";
    }
  }
  if (traces.empty()) {
    std::cerr << "error: no terminating case in the suite\n";
    return any_diverged ? kExitBudget : (any_faulted ? kExitFault : kExitParse);
  }
  if (!traces_out.empty()) {
    std::ofstream out(traces_out);
    for (const clpv::Trace& t : traces) {
      json rec;
      for (const auto& [k, v] : t.entry) rec["inputs"][k] = v;
      rec["return"] = t.exit_return;
      out << rec.dump() << "\n";
    }
  }
  for (const clpv::InvariantPtr& f : clpv::infer_invariants(traces)) {
    std::cout << clpv::to_string(f) << "\n";
  }
  return kExitOk;
}

json verdict_json(const std::string& text, const clpv::Verdict& v) {
  json rec;
  rec["invariant"] = text;
  switch (v.kind) {
    case clpv::Verdict::Kind::Proved:
      rec["verdict"] = "proved";
      break;
    case clpv::Verdict::Kind::Disproved: {
      rec["verdict"] = "disproved";
      json cx;
      for (const auto& [k, val] : v.counter_inputs) cx["inputs"][k] = val;
      cx["return"] = v.counter_output;
      cx["interpreter_confirmed"] = v.interpreter_confirmed;
      rec["counterexample"] = cx;
      break;
    }
    case clpv::Verdict::Kind::Unknown:
      rec["verdict"] = "unknown";
      rec["reason"] = clpv::to_string(v.reason);
      break;
    case clpv::Verdict::Kind::Error:
      rec["verdict"] = "error";
      rec["reason"] = v.message;
      break;
  }
  rec["stats"] = {{"unfoldings", v.stats.unfoldings},
                  {"label_nodes", v.stats.label_nodes},
                  {"propagations", v.stats.propagations},
                  {"millis", v.stats.millis}};
  return rec;
}

void print_verdict(const std::string& text, const clpv::Verdict& v) {
  switch (v.kind) {
    case clpv::Verdict::Kind::Proved:
      std::cout << "proved: " << text << " [unfoldings=" << v.stats.unfoldings
                << ", label_nodes=" << v.stats.label_nodes << "]\n";
      break;
    case clpv::Verdict::Kind::Disproved: {
      std::cout << "disproved: " << text << "  counter-example ";
      bool first = true;
      for (const auto& [k, val] : v.counter_inputs) {
        if (!first) std::cout << ", ";
        first = false;
        std::cout << k << "=" << val;
      }
      std::cout << " -> " << v.counter_output
                << (v.interpreter_confirmed ? " (interpreter-confirmed)"
                                            : " (UNCONFIRMED)")
                << "\n";
      break;
    }
    case clpv::Verdict::Kind::Unknown:
      std::cout << "unknown(" << clpv::to_string(v.reason) << "): " << text
                << "\n";
      break;
    case clpv::Verdict::Kind::Error:
      std::cout << "error: " << text << ": " << v.message << "\n";
      break;
  }
}

int cmd_check(const std::string& file, const std::string& invs_path,
              const clpv::CheckConfig& cfg, const std::string& json_out,
              unsigned jobs) {
  clpv::ProgramAst ast = parse_or_exit(file);
  std::ifstream in(invs_path);
  if (!in) {
    std::cerr << "error: cannot open " << invs_path << "\n";
    return kExitParse;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    lines.push_back(line);
  }

  std::vector<clpv::Verdict> verdicts(lines.size());
  auto check_one = [&](std::size_t i) {
    try {
      clpv::InvariantPtr f = clpv::parse_invariant(lines[i]);
      verdicts[i] = clpv::check_invariant(ast, f, cfg);
    } catch (const std::exception& e) {
      verdicts[i].kind = clpv::Verdict::Kind::Error;
      verdicts[i].message = e.what();
    }
  };
  if (jobs <= 1 || lines.size() <= 1) {
    for (std::size_t i = 0; i < lines.size(); ++i) check_one(i);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= lines.size()) return;
          i = next++;
        }
        check_one(i);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, lines.size()); ++t) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) t.join();
  }

  json report = json::array();
  bool any_disproved = false, any_unknown = false, any_error = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    print_verdict(lines[i], verdicts[i]);
    report.push_back(verdict_json(lines[i], verdicts[i]));
    switch (verdicts[i].kind) {
      case clpv::Verdict::Kind::Disproved: any_disproved = true; break;
      case clpv::Verdict::Kind::Unknown: any_unknown = true; break;
      case clpv::Verdict::Kind::Error: any_error = true; break;
      default: break;
    }
  }
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << report.dump(2) << "\n";
  }
  if (any_error) return kExitParse;
  if (any_disproved) return kExitDisproved;
  if (any_unknown) return kExitUnknown;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"likely-invariant checking via constraint reasoning"};
  app.require_subcommand(1);

  int width = 8;
  std::uint64_t step_budget = 1'000'000;
  std::string emit = "none";
  std::uint64_t seed = 0;  // reserved: search is deterministic

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--width", width, "integer width in bits (2..32)")
        ->check(CLI::Range(2, 32))
        ->capture_default_str();
    cmd->add_option("--step-budget", step_budget,
                    "interpreter statement budget")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "reserved; search is deterministic");
  };

  // run
  auto* run_cmd = app.add_subcommand("run", "execute a program concretely");
  std::string run_file;
  std::vector<Val> run_inputs;
  run_cmd->add_option("file", run_file, "program (.mc)")->required();
  run_cmd->add_option("inputs", run_inputs, "parameter values");
  run_cmd->add_option("--emit", emit, "dump a stage: ast, ssa, clp")
      ->check(CLI::IsMember({"none", "ast", "ssa", "clp"}));
  add_common(run_cmd);

  // infer
  auto* infer_cmd =
      app.add_subcommand("infer", "infer likely invariants from a test suite");
  std::string infer_file, suite_file, traces_out;
  infer_cmd->add_option("file", infer_file, "program (.mc)")->required();
  infer_cmd->add_option("suite", suite_file, "input rows, one per line")
      ->required();
  infer_cmd->add_option("--traces-out", traces_out,
                        "write collected traces as JSON lines");
  add_common(infer_cmd);

  // check
  auto* check_cmd =
      app.add_subcommand("check", "prove or disprove invariants");
  std::string check_file, invs_file, json_out;
  std::uint64_t max_unfold = 0, label_budget = 1'000'000;
  double timeout = 60.0;
  unsigned jobs = 1;
  check_cmd->add_option("file", check_file, "program (.mc)")->required();
  check_cmd->add_option("invariants", invs_file, "invariants, one per line")
      ->required();
  check_cmd->add_option("--max-unfold", max_unfold,
                        "loop materialization bound (default 2*MAX_INT+4)");
  check_cmd->add_option("--label-budget", label_budget, "search node budget")
      ->capture_default_str();
  check_cmd->add_option("--timeout", timeout, "wall-clock seconds per check")
      ->capture_default_str();
  check_cmd->add_option("--json-out", json_out, "machine-readable report");
  check_cmd->add_option("--jobs", jobs, "parallel checks")
      ->capture_default_str();
  add_common(check_cmd);

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    return cmd_run(run_file, run_inputs, width, step_budget, emit);
  }
  if (infer_cmd->parsed()) {
    return cmd_infer(infer_file, suite_file, width, step_budget, traces_out);
  }
  clpv::CheckConfig cfg;
  cfg.width = clpv::IntWidth(width);
  if (max_unfold > 0) cfg.unfold_budget = static_cast<Val>(max_unfold);
  cfg.label_budget = label_budget;
  cfg.wall_clock_seconds = timeout;
  cfg.step_budget = step_budget;
  return cmd_check(check_file, invs_file, cfg, json_out, jobs);
}
