#include <benchmark/benchmark.h>

#include "clpv/compile.hpp"
#include "clpv/interp.hpp"
#include "clpv/refute.hpp"
#include "clpv/ssa.hpp"

namespace {

const char* kFoo = R"(
int foo(int n, int r) {
  int s = 0;
  while (n > 0) {
    n = n - 1;
    if (s == 0) {
      s = 1;
      r = r + 1;
    } else {
      s = 0;
      r = r - 1;
    }
  }
  return r;
}
)";

void bench_domain_ops(benchmark::State& state) {
  clpv::Domain a = clpv::Domain::interval(-100, 100);
  for (int i = -100; i <= 100; i += 7) a = a.remove(i);
  clpv::Domain b = clpv::Domain::interval(-50, 150);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.intersect(b));
    benchmark::DoNotOptimize(a.unite(b));
    benchmark::DoNotOptimize(clpv::iset::add(a, b));
  }
}
BENCHMARK(bench_domain_ops);

void bench_forward_execution(benchmark::State& state) {
  clpv::ProgramAst ast = clpv::parse_program(kFoo);
  clpv::SsaProgram ssa = clpv::to_ssa(ast);
  clpv::IntWidth w(8);
  for (auto _ : state) {
    clpv::CompiledProgram cp = clpv::compile(ssa, w, 2 * w.max_int() + 4);
    cp.store->post(clpv::Constraint::cmp(clpv::CmpOp::Eq,
                                         clpv::Term::v(cp.inputs[0]),
                                         clpv::Term::c(state.range(0))));
    cp.store->post(clpv::Constraint::cmp(
        clpv::CmpOp::Eq, clpv::Term::v(cp.inputs[1]), clpv::Term::c(3)));
    cp.store->propagate();
    benchmark::DoNotOptimize(cp.store->domain(cp.output));
  }
}
BENCHMARK(bench_forward_execution)->Arg(5)->Arg(50)->Arg(127);

void bench_prove_invariant3(benchmark::State& state) {
  clpv::ProgramAst ast = clpv::parse_program(kFoo);
  clpv::InvariantPtr inv = clpv::parse_invariant("return >= orig(r)");
  clpv::CheckConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(clpv::check_invariant(ast, inv, cfg));
  }
}
BENCHMARK(bench_prove_invariant3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
